//! Circuit intermediate representation and Fourier-transform builders.
//!
//! All Fourier builders here work in lattice terms under
//! [`LATTICE_BIT_ORDER`]: the transform they implement is
//! `F = 2^{-n/2} Σ_{l,k} e^{2πi lk/2^n} |l⟩⟨k|` indexed by lattice site.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bit_order::{BitOrder, LATTICE_BIT_ORDER};
use crate::error::{Error, Result};
use crate::gate::GateOp;

pub const MAX_QFT_QUBITS: usize = 20;

/// Ordered gate list over a fixed register. Every gate index is checked on
/// insertion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<GateOp>,
    label: String,
}

impl Circuit {
    pub fn new(n_qubits: usize, label: impl Into<String>) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
            label: label.into(),
        }
    }

    pub fn from_gates(
        n_qubits: usize,
        label: impl Into<String>,
        gates: impl IntoIterator<Item = GateOp>,
    ) -> Result<Self> {
        let mut c = Circuit::new(n_qubits, label);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: GateOp) -> Result<&mut Self> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Appends `other` (executed after `self`).
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(self)
    }

    pub fn then(mut self, other: &Circuit) -> Result<Self> {
        self.append(other)?;
        Ok(self)
    }

    /// Reversed gate list with each gate inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(GateOp::inverse).collect(),
            label: format!("{}^-1", self.label),
        }
    }

    /// Relabels qubits through a permutation of `0..n`.
    pub fn map_qubits(&self, f: impl Fn(usize) -> usize) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().map(|g| g.map_qubits(&f)).collect(),
            label: self.label.clone(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }
}

fn check_qft_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QFT_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "Fourier transform size {n} outside 1..={MAX_QFT_QUBITS}"
        )));
    }
    Ok(())
}

/// Hadamard/controlled-phase ladder without the final qubit reversal.
/// Lattice matrix `R·F`, where `R` reverses the bit order.
///
/// The controlled phase on qubits `(j, m)` is labelled with the higher qubit as
/// control; `CU1` is symmetric so this is only a naming choice.
pub fn build_qft_unswapped(n: usize) -> Result<Circuit> {
    check_qft_size(n)?;
    let mut c = Circuit::new(n, format!("qft{n}_noswap"));
    for j in (0..n).rev() {
        c.push(GateOp::h(j))?;
        for m in (0..j).rev() {
            let k = j - m + 1;
            c.push(GateOp::cu1(j, m, 2.0 * PI / (1u64 << k) as f64))?;
        }
    }
    Ok(relabel(c, LATTICE_BIT_ORDER))
}

/// Exact transform `F` (ladder followed by qubit-reversal swaps).
pub fn build_qft(n: usize) -> Result<Circuit> {
    let mut c = build_qft_unswapped(n)?;
    c.append(&relabel(reversal_swaps(n)?, LATTICE_BIT_ORDER))?;
    Ok(c.with_label(format!("qft{n}")))
}

/// Exact inverse `F†`.
pub fn build_iqft(n: usize) -> Result<Circuit> {
    Ok(build_qft(n)?.inverse().with_label(format!("iqft{n}")))
}

/// Gate sequence quoted for the inverse transform in the two- and three-qubit
/// tunneling circuits, in execution order:
///
/// * n = 2: `H(q1)`, `CU1(π/2) q1→q0`, `H(q0)`
/// * n = 3: `H(q2)`, `CU1(π/2) q2→q1`, `CU1(π/4) q2→q0`, `H(q1)`, `CU1(π/2) q1→q0`, `H(q0)`
///
/// Its phases are positive, so with q[n-1] most significant its matrix is
/// `R·F`: the forward transform with bit-reversed output, not `F†`. The
/// literal sequence is kept (physical qubit labels, no relabelling).
pub fn build_paper_iqft(n: usize) -> Result<Circuit> {
    let gates = match n {
        2 => vec![GateOp::h(1), GateOp::cu1(1, 0, PI / 2.0), GateOp::h(0)],
        3 => vec![
            GateOp::h(2),
            GateOp::cu1(2, 1, PI / 2.0),
            GateOp::cu1(2, 0, PI / 4.0),
            GateOp::h(1),
            GateOp::cu1(1, 0, PI / 2.0),
            GateOp::h(0),
        ],
        _ => {
            return Err(Error::InvalidArgument(format!(
                "quoted inverse transform exists only for n = 2, 3 (got {n})"
            )))
        }
    };
    Circuit::from_gates(n, format!("paper_iqft{n}"), gates)
}

/// `floor(n/2)` swaps, each as three CNOTs, reversing qubit order.
fn reversal_swaps(n: usize) -> Result<Circuit> {
    let mut c = Circuit::new(n, "reverse");
    for i in 0..n / 2 {
        let j = n - 1 - i;
        c.push(GateOp::cnot(i, j))?;
        c.push(GateOp::cnot(j, i))?;
        c.push(GateOp::cnot(i, j))?;
    }
    Ok(c)
}

/// Moves a circuit written with "qubit s = lattice bit of weight 2^s" onto
/// physical qubits under `order`.
pub(crate) fn relabel(c: Circuit, order: BitOrder) -> Circuit {
    match order {
        BitOrder::MsbHighestQubit => c,
        BitOrder::MsbLowestQubit => {
            let n = c.n_qubits();
            c.map_qubits(|q| order.qubit_for_significance(n, q))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_qubit_qft_is_hadamard() {
        assert_eq!(build_qft(1).unwrap().gates(), &[GateOp::h(0)]);
    }

    #[test]
    fn quoted_two_qubit_iqft_sequence() {
        let c = build_paper_iqft(2).unwrap();
        assert_eq!(
            c.gates(),
            &[GateOp::h(1), GateOp::cu1(1, 0, PI / 2.0), GateOp::h(0)]
        );
    }

    #[test]
    fn quoted_three_qubit_iqft_has_quarter_phase_on_2_0() {
        let c = build_paper_iqft(3).unwrap();
        assert!(c.gates().contains(&GateOp::cu1(2, 0, PI / 4.0)));
        assert_eq!(c.gates().iter().filter(|g| matches!(g, GateOp::H { .. })).count(), 3);
        assert_eq!(c.two_qubit_count(), 3);
    }

    #[test]
    fn textbook_ladder_equals_quoted_sequence() {
        for n in [2, 3] {
            assert_eq!(
                build_qft_unswapped(n).unwrap().gates(),
                build_paper_iqft(n).unwrap().gates()
            );
        }
    }

    #[test]
    fn size_limits() {
        assert!(build_qft(0).is_err());
        assert!(build_qft(21).is_err());
        assert!(build_paper_iqft(4).is_err());
    }

    #[test]
    fn push_rejects_bad_index() {
        let mut c = Circuit::new(2, "t");
        assert!(c.push(GateOp::h(5)).is_err());
        assert!(c.is_empty());
    }
}
