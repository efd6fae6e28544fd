//! Gate set and 2×2 matrix definitions.
//!
//! Conventions:
//! * `Rz(θ) = diag(e^{-iθ/2}, e^{iθ/2})`
//! * `U1(λ) = diag(1, e^{iλ})`
//! * `U3(θ, φ, λ) = [[cos θ/2, -e^{iλ} sin θ/2], [e^{iφ} sin θ/2, e^{i(λ+φ)} cos θ/2]]`
//! * `CU1(λ)` multiplies the amplitude by `e^{iλ}` when control and target are both 1.
//!
//! With these, `Rz(θ) = H · U3(θ, -π/2, π/2) · H` exactly.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Matrix2 = [[Complex64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GateOp {
    H { target: usize },
    X { target: usize },
    Rz { target: usize, theta: f64 },
    U1 { target: usize, lambda: f64 },
    U3 { target: usize, theta: f64, phi: f64, lambda: f64 },
    Cnot { control: usize, target: usize },
    Cu1 { control: usize, target: usize, lambda: f64 },
}

impl GateOp {
    pub fn h(target: usize) -> Self {
        GateOp::H { target }
    }
    pub fn x(target: usize) -> Self {
        GateOp::X { target }
    }
    pub fn rz(target: usize, theta: f64) -> Self {
        GateOp::Rz { target, theta }
    }
    pub fn u1(target: usize, lambda: f64) -> Self {
        GateOp::U1 { target, lambda }
    }
    pub fn u3(target: usize, theta: f64, phi: f64, lambda: f64) -> Self {
        GateOp::U3 {
            target,
            theta,
            phi,
            lambda,
        }
    }
    pub fn cnot(control: usize, target: usize) -> Self {
        GateOp::Cnot { control, target }
    }
    pub fn cu1(control: usize, target: usize, lambda: f64) -> Self {
        GateOp::Cu1 {
            control,
            target,
            lambda,
        }
    }

    /// Qubits the gate touches; the control (if any) comes first.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            GateOp::H { target }
            | GateOp::X { target }
            | GateOp::Rz { target, .. }
            | GateOp::U1 { target, .. }
            | GateOp::U3 { target, .. } => vec![target],
            GateOp::Cnot { control, target } | GateOp::Cu1 { control, target, .. } => {
                vec![control, target]
            }
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, GateOp::Cnot { .. } | GateOp::Cu1 { .. })
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        for &q in &qubits {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::SameControlTarget(qubits[0]));
        }
        Ok(())
    }

    pub fn inverse(&self) -> Self {
        match *self {
            GateOp::H { .. } | GateOp::X { .. } | GateOp::Cnot { .. } => *self,
            GateOp::Rz { target, theta } => GateOp::rz(target, -theta),
            GateOp::U1 { target, lambda } => GateOp::u1(target, -lambda),
            GateOp::U3 {
                target,
                theta,
                phi,
                lambda,
            } => GateOp::u3(target, -theta, -lambda, -phi),
            GateOp::Cu1 {
                control,
                target,
                lambda,
            } => GateOp::cu1(control, target, -lambda),
        }
    }

    /// Same gate acting on relabelled qubits.
    pub fn map_qubits(&self, f: impl Fn(usize) -> usize) -> Self {
        match *self {
            GateOp::H { target } => GateOp::h(f(target)),
            GateOp::X { target } => GateOp::x(f(target)),
            GateOp::Rz { target, theta } => GateOp::rz(f(target), theta),
            GateOp::U1 { target, lambda } => GateOp::u1(f(target), lambda),
            GateOp::U3 {
                target,
                theta,
                phi,
                lambda,
            } => GateOp::u3(f(target), theta, phi, lambda),
            GateOp::Cnot { control, target } => GateOp::cnot(f(control), f(target)),
            GateOp::Cu1 {
                control,
                target,
                lambda,
            } => GateOp::cu1(f(control), f(target), lambda),
        }
    }

    /// The 2×2 matrix of a single-qubit gate; `None` for two-qubit gates.
    pub fn single_qubit_matrix(&self) -> Option<Matrix2> {
        match *self {
            GateOp::H { .. } => Some(hadamard()),
            GateOp::X { .. } => Some(pauli_x()),
            GateOp::Rz { theta, .. } => Some(rz_matrix(theta)),
            GateOp::U1 { lambda, .. } => Some(u1_matrix(lambda)),
            GateOp::U3 {
                theta, phi, lambda, ..
            } => Some(u3_matrix(theta, phi, lambda)),
            GateOp::Cnot { .. } | GateOp::Cu1 { .. } => None,
        }
    }

    /// Full 4×4 matrix of a two-qubit gate in the local basis
    /// `|control, target⟩` with the control as the high bit.
    pub fn two_qubit_matrix(&self) -> Option<[[Complex64; 4]; 4]> {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let mut m = [[zero; 4]; 4];
        match *self {
            GateOp::Cnot { .. } => {
                m[0][0] = one;
                m[1][1] = one;
                m[2][3] = one;
                m[3][2] = one;
            }
            GateOp::Cu1 { lambda, .. } => {
                m[0][0] = one;
                m[1][1] = one;
                m[2][2] = one;
                m[3][3] = Complex64::from_polar(1.0, lambda);
            }
            _ => return None,
        }
        Some(m)
    }
}

pub fn hadamard() -> Matrix2 {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

pub fn pauli_x() -> Matrix2 {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    [[z, o], [o, z]]
}

pub fn pauli_y() -> Matrix2 {
    let z = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [[z, -i], [i, z]]
}

pub fn pauli_z() -> Matrix2 {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    [[o, z], [z, -o]]
}

pub fn rz_matrix(theta: f64) -> Matrix2 {
    let z = Complex64::new(0.0, 0.0);
    [
        [Complex64::from_polar(1.0, -theta / 2.0), z],
        [z, Complex64::from_polar(1.0, theta / 2.0)],
    ]
}

pub fn u1_matrix(lambda: f64) -> Matrix2 {
    let z = Complex64::new(0.0, 0.0);
    [
        [Complex64::new(1.0, 0.0), z],
        [z, Complex64::from_polar(1.0, lambda)],
    ]
}

pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> Matrix2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [
            Complex64::new(c, 0.0),
            -Complex64::from_polar(s, lambda),
        ],
        [
            Complex64::from_polar(s, phi),
            Complex64::from_polar(c, lambda + phi),
        ],
    ]
}

pub fn matmul2(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use super::*;

    fn dagger2(m: &Matrix2) -> Matrix2 {
        [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
    }

    fn max_dev_from_identity(m: &Matrix2) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in m.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((z - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    #[test]
    fn hz_u3_h_is_rz() {
        // R_z(θ) = H U3(θ, -π/2, π/2) H, with θ = 5 as used for the potential.
        let h = hadamard();
        let lhs = matmul2(&matmul2(&h, &u3_matrix(5.0, -FRAC_PI_2, FRAC_PI_2)), &h);
        let rhs = rz_matrix(5.0);
        for i in 0..2 {
            for j in 0..2 {
                assert!((lhs[i][j] - rhs[i][j]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn every_single_qubit_gate_is_unitary() {
        let gates = [
            GateOp::h(0),
            GateOp::x(0),
            GateOp::rz(0, 1.234),
            GateOp::u1(0, -0.7),
            GateOp::u3(0, 0.3, 1.1, -2.4),
            GateOp::u3(0, PI, 0.0, PI),
        ];
        for g in gates {
            let m = g.single_qubit_matrix().unwrap();
            assert!(max_dev_from_identity(&matmul2(&dagger2(&m), &m)) < 1e-12, "{g:?}");
            let inv = g.inverse().single_qubit_matrix().unwrap();
            assert!(max_dev_from_identity(&matmul2(&inv, &m)) < 1e-12, "{g:?}");
        }
    }

    #[test]
    fn validation() {
        assert!(GateOp::cnot(1, 1).validate(2).is_err());
        assert!(GateOp::h(2).validate(2).is_err());
        assert!(GateOp::cu1(0, 1, 0.3).validate(2).is_ok());
    }
}
