//! Reference operators built directly from the lattice model, without the
//! library's oracle module. Taylor scaling-and-squaring for exponentials.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type M = DMatrix<Complex64>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub const MOMENTA_2: [f64; 4] = [0.0, PI / 2.0, PI, -PI / 2.0];
pub const MOMENTA_3: [f64; 8] = [
    0.0,
    PI / 4.0,
    PI / 2.0,
    3.0 * PI / 4.0,
    PI,
    -PI / 4.0,
    -PI / 2.0,
    -3.0 * PI / 4.0,
];

pub fn momenta(n: usize) -> Vec<f64> {
    match n {
        2 => MOMENTA_2.to_vec(),
        3 => MOMENTA_3.to_vec(),
        _ => panic!("reference momenta only for n = 2, 3"),
    }
}

/// `F[l][k] = e^{2πi lk/N}/√N`.
pub fn dft(n: usize) -> M {
    let dim = 1usize << n;
    let s = 1.0 / (dim as f64).sqrt();
    M::from_fn(dim, dim, |l, k| Complex64::from_polar(s, 2.0 * PI * (l * k % dim) as f64 / dim as f64))
}

pub fn kinetic(n: usize, mass: f64) -> M {
    let f = dft(n);
    let d = M::from_diagonal(&nalgebra::DVector::from_iterator(
        1 << n,
        momenta(n).into_iter().map(|p| c(p * p / (2.0 * mass))),
    ));
    &f * d * f.adjoint()
}

/// `v σ_z` on lattice bit `bit`: `+v` where the bit is 0.
pub fn potential(n: usize, bit: Option<usize>, v: f64) -> M {
    let dim = 1usize << n;
    M::from_fn(dim, dim, |r, k| {
        if r != k {
            return c(0.0);
        }
        match bit {
            Some(b) if (r >> b) & 1 == 1 => c(-v),
            Some(_) => c(v),
            None => c(0.0),
        }
    })
}

/// `e^{-i H t}`.
pub fn expm_i(h: &M, t: f64) -> M {
    let dim = h.nrows();
    let a = h.map(|z| z * Complex64::new(0.0, -t));
    let norm: f64 = a.iter().map(|z| z.norm()).sum::<f64>().max(1e-300);
    let squarings = (norm.log2().ceil().max(0.0) as u32) + 4;
    let a = a.scale(1.0 / f64::from(2u32.pow(squarings)));
    let mut term = M::identity(dim, dim);
    let mut sum = M::identity(dim, dim);
    for k in 1..=30 {
        term = &term * &a / c(k as f64);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `min_φ ‖A − e^{iφ}B‖_F / √dim`.
pub fn phase_distance(a: &M, b: &M) -> f64 {
    let tr: Complex64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let ph = if tr.norm() > 0.0 { tr / tr.norm() } else { c(1.0) };
    let sq: f64 = a.iter().zip(b.iter()).map(|(x, y)| (x - ph * y).norm_sqr()).sum();
    sq.sqrt() / (a.nrows() as f64).sqrt()
}

/// Largest entrywise gap after aligning the global phase.
pub fn max_entry_gap(a: &M, b: &M) -> f64 {
    let tr: Complex64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let ph = if tr.norm() > 0.0 { tr / tr.norm() } else { c(1.0) };
    a.iter().zip(b.iter()).map(|(x, y)| (x - ph * y).norm()).fold(0.0, f64::max)
}

pub fn to_m(op: &qtunnel::oracle::DenseOperator) -> M {
    op.entries().clone()
}

pub fn basis(dim: usize, k: usize) -> nalgebra::DVector<Complex64> {
    let mut v = nalgebra::DVector::from_element(dim, c(0.0));
    v[k] = c(1.0);
    v
}

/// Site probabilities after each of `steps` applications of `u` to `|k⟩`.
pub fn trace(u: &M, k: usize, steps: usize) -> Vec<Vec<f64>> {
    let mut psi = basis(u.nrows(), k);
    let mut rows = vec![psi.iter().map(|z| z.norm_sqr()).collect()];
    for _ in 0..steps {
        psi = u * psi;
        rows.push(psi.iter().map(|z| z.norm_sqr()).collect());
    }
    rows
}

pub fn label_index(label: &str) -> usize {
    usize::from_str_radix(label, 2).unwrap()
}
