//! Pauli-basis state tomography by linear inversion.
//!
//! Setting and Pauli labels are written like basis labels: character `i`
//! refers to qubit `n-1-i`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::density::{fidelity, DensityMatrix};
use crate::error::{Error, Result};
use crate::gate::{pauli_x, pauli_y, pauli_z, GateOp, Matrix2};
use crate::linalg::CMatrix;
use crate::noise::{noisy_run, NoiseModel};
use crate::state::{ShotCounts, StateVector};

pub const MAX_TOMOGRAPHY_QUBITS: usize = 6;

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_TOMOGRAPHY_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "tomography supports 1..={MAX_TOMOGRAPHY_QUBITS} qubits, got {n}"
        )));
    }
    Ok(())
}

fn words(n: usize, alphabet: &[char]) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| alphabet.iter().map(move |c| format!("{w}{c}")))
            .collect();
    }
    out
}

/// All `3^n` local measurement bases, e.g. `"XY"`.
pub fn tomography_settings(n: usize) -> Result<Vec<String>> {
    check_n(n)?;
    Ok(words(n, &['X', 'Y', 'Z']))
}

/// Rotation applied before a Z-basis readout: `H` for X, `S†` then `H` for Y.
pub fn basis_change(setting: &str) -> Result<Circuit> {
    let n = setting.len();
    check_n(n)?;
    let mut c = Circuit::new(n, format!("meas_{setting}"));
    for (i, ch) in setting.chars().enumerate() {
        let q = n - 1 - i;
        match ch {
            'X' => {
                c.push(GateOp::h(q))?;
            }
            'Y' => {
                c.push(GateOp::u1(q, -FRAC_PI_2))?;
                c.push(GateOp::h(q))?;
            }
            'Z' => {}
            other => {
                return Err(Error::InvalidArgument(format!("bad basis `{other}` in `{setting}`")));
            }
        }
    }
    Ok(c)
}

fn pauli_matrix(label: &str) -> Result<CMatrix> {
    let mut acc = CMatrix::identity(1, 1);
    for ch in label.chars() {
        let m: Matrix2 = match ch {
            'I' => [
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            ],
            'X' => pauli_x(),
            'Y' => pauli_y(),
            'Z' => pauli_z(),
            other => return Err(Error::InvalidArgument(format!("bad Pauli `{other}`"))),
        };
        acc = acc.kronecker(&CMatrix::from_fn(2, 2, |r, c| m[r][c]));
    }
    Ok(acc)
}

/// Exact `⟨ψ|P|ψ⟩` for every Pauli string except the identity.
pub fn pauli_expectations_exact(state: &StateVector) -> Result<BTreeMap<String, f64>> {
    let n = state.n_qubits();
    check_n(n)?;
    let v = nalgebra::DVector::from_column_slice(state.amplitudes());
    let mut out = BTreeMap::new();
    for p in words(n, &['I', 'X', 'Y', 'Z']) {
        if p.chars().all(|c| c == 'I') {
            continue;
        }
        let m = pauli_matrix(&p)?;
        out.insert(p, v.dotc(&(&m * &v)).re);
    }
    Ok(out)
}

/// Estimates each Pauli expectation as the mean over every setting that
/// measures its non-identity factors.
pub fn pauli_expectations_from_counts(
    n: usize,
    counts: &BTreeMap<String, ShotCounts>,
) -> Result<BTreeMap<String, f64>> {
    let settings = tomography_settings(n)?;
    let shots: Vec<u64> = settings
        .iter()
        .map(|s| {
            counts
                .get(s)
                .map(ShotCounts::total_shots)
                .ok_or_else(|| Error::InvalidArgument(format!("missing tomography setting `{s}`")))
        })
        .collect::<Result<_>>()?;
    if shots.iter().any(|&s| s != shots[0]) {
        return Err(Error::InvalidArgument("tomography settings have unequal shot counts".into()));
    }
    let mut out = BTreeMap::new();
    for p in words(n, &['I', 'X', 'Y', 'Z']) {
        if p.chars().all(|c| c == 'I') {
            continue;
        }
        let pc: Vec<char> = p.chars().collect();
        let mut sum = 0.0;
        let mut used = 0usize;
        for s in &settings {
            let compatible = s.chars().zip(&pc).all(|(sc, &c)| c == 'I' || c == sc);
            if !compatible {
                continue;
            }
            let sc = &counts[s];
            let total = sc.total_shots() as f64;
            let mut e = 0.0;
            for (label, k) in sc.iter() {
                let odd = label
                    .chars()
                    .zip(&pc)
                    .filter(|(b, &c)| c != 'I' && *b == '1')
                    .count()
                    % 2
                    == 1;
                e += if odd { -(k as f64) } else { k as f64 };
            }
            sum += e / total;
            used += 1;
        }
        out.insert(p, sum / used as f64);
    }
    Ok(out)
}

/// `ρ = 2^{-n} (I + Σ_P ⟨P⟩ P)`, projected onto the physical states.
pub fn density_from_expectations(n: usize, expectations: &BTreeMap<String, f64>) -> Result<DensityMatrix> {
    check_n(n)?;
    let dim = 1usize << n;
    let mut rho = CMatrix::identity(dim, dim);
    for (p, &e) in expectations {
        if p.len() != n {
            return Err(Error::InvalidArgument(format!("Pauli `{p}` is not {n} qubits long")));
        }
        rho += pauli_matrix(p)?.scale(e);
    }
    DensityMatrix::project_physical(n, &rho.scale(1.0 / dim as f64))
}

/// Linear inversion from one count histogram per setting.
pub fn reconstruct_density(n: usize, counts: &BTreeMap<String, ShotCounts>) -> Result<DensityMatrix> {
    density_from_expectations(n, &pauli_expectations_from_counts(n, counts)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TomographyResult {
    pub settings: Vec<String>,
    pub counts: BTreeMap<String, ShotCounts>,
    pub reconstructed: DensityMatrix,
    /// Squared Uhlmann fidelity against the noiseless pure state.
    pub fidelity_vs_ideal: f64,
}

/// Seed for setting `i`, spread so neighbouring settings share no stream.
fn setting_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_add((i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Prepares `prep` on `initial` under `noise`, measures every setting with
/// `shots` shots, reconstructs, and compares with the noiseless state.
pub fn run_tomography(
    prep: &Circuit,
    initial: &StateVector,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
) -> Result<TomographyResult> {
    let n = prep.n_qubits();
    let settings = tomography_settings(n)?;
    let mut counts = BTreeMap::new();
    for (i, s) in settings.iter().enumerate() {
        let c = prep.clone().then(&basis_change(s)?)?;
        counts.insert(s.clone(), noisy_run(&c, initial, noise, shots, setting_seed(seed, i))?);
    }
    let rho = reconstruct_density(n, &counts)?;
    let mut ideal = initial.clone();
    ideal.run(prep)?;
    let f = fidelity(&rho, &DensityMatrix::from_state(&ideal))?;
    Ok(TomographyResult {
        settings,
        counts,
        reconstructed: rho,
        fidelity_vs_ideal: f,
    })
}
