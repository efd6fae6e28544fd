use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::GateOp;
use crate::state::MAX_QUBITS;

use super::step::TrotterParams;

/// Momentum eigenvalue of each Fourier index `l`:
/// `2πl/2^n` for `l ≤ 2^{n-1}`, `2π(2^{n-1} - l)/2^n` above.
///
/// The second branch is taken literally. For `n ≥ 3` it does not give the
/// usual aliased momenta `2π(l - 2^n)/2^n`; e.g. `n = 3` yields
/// `(…, π, -π/4, -π/2, -3π/4)`.
pub fn momentum_eigenvalues(n: usize) -> Result<Vec<f64>> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "momentum grid needs 1..={MAX_QUBITS} qubits, got {n}"
        )));
    }
    let dim = 1usize << n;
    let half = dim / 2;
    let step = 2.0 * PI / dim as f64;
    Ok((0..dim)
        .map(|l| {
            if l <= half {
                step * l as f64
            } else {
                step * (half as f64 - l as f64)
            }
        })
        .collect())
}

/// `exp(-i p_l² dt / 2m)` for each Fourier index.
pub fn kinetic_phase_diagonal(n: usize, params: &TrotterParams) -> Result<Vec<Complex64>> {
    params.check_physical()?;
    Ok(momentum_eigenvalues(n)?
        .into_iter()
        .map(|p| Complex64::from_polar(1.0, -p * p * params.dt / (2.0 * params.mass)))
        .collect())
}

/// Prefactor `γ` and coefficients `c_i` of a hand-written kinetic diagonal.
/// Gate angles are `2γ c_i Δt` at `m = 0.5`.
///
/// Coefficient order: single-qubit terms from the highest qubit down, then
/// controlled phases `(2,1), (2,0), (1,0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DConstants {
    pub n_qubits: usize,
    pub gamma: f64,
    pub c: &'static [f64],
}

pub const TWO_QUBIT_GAMMA: f64 = PI * PI / 8.0;
pub const TWO_QUBIT_C: [f64; 3] = [-1.0, -4.0, 4.0];

/// `-π²/(32√2)`.
pub const THREE_QUBIT_GAMMA: f64 = -PI * PI / (32.0 * SQRT_2);
/// Published two-decimal values.
pub const THREE_QUBIT_C_ROUNDED: [f64; 6] = [-1.42, -5.66, -22.63, -22.63, 11.31, -5.66];
/// Multiples of `√2` that reproduce the momentum-grid kinetic diagonal.
pub const THREE_QUBIT_C_CLOSED_FORM: [f64; 6] = [
    SQRT_2,
    4.0 * SQRT_2,
    16.0 * SQRT_2,
    4.0 * SQRT_2,
    -8.0 * SQRT_2,
    -16.0 * SQRT_2,
];

impl DConstants {
    pub const TWO_QUBIT: DConstants = DConstants {
        n_qubits: 2,
        gamma: TWO_QUBIT_GAMMA,
        c: &TWO_QUBIT_C,
    };
    pub const THREE_QUBIT_ROUNDED: DConstants = DConstants {
        n_qubits: 3,
        gamma: THREE_QUBIT_GAMMA,
        c: &THREE_QUBIT_C_ROUNDED,
    };
    pub const THREE_QUBIT_CLOSED_FORM: DConstants = DConstants {
        n_qubits: 3,
        gamma: THREE_QUBIT_GAMMA,
        c: &THREE_QUBIT_C_CLOSED_FORM,
    };
}

fn pair_slots(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in (0..n).rev() {
        for m in (0..j).rev() {
            out.push((j, m));
        }
    }
    out
}

/// Kinetic diagonal from a constant set: controlled phases first, then `Rz`
/// by ascending qubit.
pub fn build_d_from_constants(k: &DConstants, params: &TrotterParams) -> Result<Circuit> {
    params.check_physical()?;
    let n = k.n_qubits;
    let pairs = pair_slots(n);
    if k.c.len() != n + pairs.len() {
        return Err(Error::InvalidArgument(format!(
            "{n}-qubit diagonal needs {} coefficients, got {}",
            n + pairs.len(),
            k.c.len()
        )));
    }
    let angle = |c: f64| 2.0 * k.gamma * c * params.dt / (2.0 * params.mass);
    let mut circ = Circuit::new(n, format!("d{n}_constants"));
    for (slot, &(j, m)) in pairs.iter().enumerate() {
        circ.push(GateOp::cu1(j, m, angle(k.c[n + slot])))?;
    }
    for q in 0..n {
        circ.push(GateOp::rz(q, angle(k.c[n - 1 - q])))?;
    }
    Ok(circ)
}

/// The published kinetic diagonals for `Δt = 0.1`, `m = 0.5`, angles as
/// printed, controlled phases first then `Rz` by ascending qubit.
///
/// * n = 2: `CU1(π²/10) q1→q0`, `Rz(-π²/10) q0`, `Rz(-π²/40) q1`
/// * n = 3: `CU1(π²/10) q2→q1`, `CU1(π²/20) q2→q0`, `CU1(-π²/40) q1→q0`,
///   `Rz(-π²/10) q0`, `Rz(-π²/40) q1`, `Rz(-π²/160) q2`
///
/// The three-qubit version has the `2→1` and `1→0` phases exchanged relative
/// to [`kinetic_phase_diagonal`]; see [`DConstants::THREE_QUBIT_CLOSED_FORM`].
pub fn build_paper_d(n: usize) -> Result<Circuit> {
    let pi2 = PI * PI;
    let gates = match n {
        2 => vec![
            GateOp::cu1(1, 0, pi2 / 10.0),
            GateOp::rz(0, -pi2 / 10.0),
            GateOp::rz(1, -pi2 / 40.0),
        ],
        3 => vec![
            GateOp::cu1(2, 1, pi2 / 10.0),
            GateOp::cu1(2, 0, pi2 / 20.0),
            GateOp::cu1(1, 0, -pi2 / 40.0),
            GateOp::rz(0, -pi2 / 10.0),
            GateOp::rz(1, -pi2 / 40.0),
            GateOp::rz(2, -pi2 / 160.0),
        ],
        _ => {
            return Err(Error::InvalidArgument(format!(
                "published kinetic diagonal exists only for n = 2, 3 (got {n})"
            )))
        }
    };
    Circuit::from_gates(n, format!("paper_d{n}"), gates)
}
