use std::f64::consts::PI;

use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::GateOp;

const UNIT_TOL: f64 = 1e-9;
const ZERO_ANGLE: f64 = 1e-12;

fn wrap(angle: f64) -> f64 {
    let a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a - 2.0 * PI
    } else {
        a
    }
}

/// Circuit equal to `diag(phases)` up to global phase. Entry `i` is the phase
/// on amplitude index `i` (bit `q` of `i` is qubit `q`).
///
/// The phase function is expanded in monomials `Π_{q∈S} x_q`. Singletons
/// become `Rz`, pairs become `CU1`, and larger monomials are split into
/// parity phases, each a CNOT ladder around a `U1`.
pub fn synthesize_diagonal(phases: &[Complex64]) -> Result<Circuit> {
    let dim = phases.len();
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "diagonal length {dim} is not a power of two ≥ 2"
        )));
    }
    if let Some((i, z)) = phases
        .iter()
        .enumerate()
        .find(|(_, z)| (z.norm() - 1.0).abs() > UNIT_TOL)
    {
        return Err(Error::InvalidArgument(format!(
            "diagonal entry {i} has modulus {}, expected 1",
            z.norm()
        )));
    }
    let n = dim.trailing_zeros() as usize;

    // Möbius transform: coef[S] multiplies Π_{q∈S} x_q.
    let mut coef: Vec<f64> = phases.iter().map(|z| z.arg()).collect();
    for b in 0..n {
        for s in 0..dim {
            if s & (1 << b) != 0 {
                coef[s] -= coef[s ^ (1 << b)];
            }
        }
    }
    let term = |s: usize| {
        let a = wrap(coef[s]);
        (a.abs() > ZERO_ANGLE).then_some(a)
    };

    let mut c = Circuit::new(n, "diag");
    for j in (0..n).rev() {
        for m in (0..j).rev() {
            if let Some(a) = term((1 << j) | (1 << m)) {
                c.push(GateOp::cu1(j, m, a))?;
            }
        }
    }
    for s in 1..dim {
        let k = s.count_ones();
        if k < 3 {
            continue;
        }
        let Some(a) = term(s) else { continue };
        let scale = a / f64::from(1u32 << (k - 1));
        // every non-empty subset t of s
        let mut t = s;
        while t != 0 {
            let sign = if t.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
            push_parity_phase(&mut c, t, sign * scale)?;
            t = (t - 1) & s;
        }
    }
    for q in 0..n {
        if let Some(a) = term(1 << q) {
            c.push(GateOp::rz(q, a))?;
        }
    }
    Ok(c)
}

/// `e^{iβ·(⊕_{q∈mask} x_q)}`.
fn push_parity_phase(c: &mut Circuit, mask: usize, beta: f64) -> Result<()> {
    let qubits: Vec<usize> = (0..c.n_qubits()).filter(|q| mask & (1 << q) != 0).collect();
    let (&top, rest) = qubits.split_last().expect("non-empty mask");
    for &q in rest {
        c.push(GateOp::cnot(q, top))?;
    }
    c.push(GateOp::u1(top, beta))?;
    for &q in rest.iter().rev() {
        c.push(GateOp::cnot(q, top))?;
    }
    Ok(())
}
