//! Mapping between lattice site indices and computational-basis indices.
//!
//! Amplitude index `i` of a [`StateVector`](crate::StateVector) always has
//! qubit `q` stored in bit `q` of `i`. A lattice site `k` is written in binary
//! with one bit per qubit; which physical qubit carries the most significant
//! bit of `k` is the bit-order convention.

use serde::{Deserialize, Serialize};

/// Which physical qubit holds the most significant bit of a lattice index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BitOrder {
    /// q[n-1] is most significant: lattice index == amplitude index.
    MsbHighestQubit,
    /// q[0] is most significant: lattice index is the bit reversal of the
    /// amplitude index.
    MsbLowestQubit,
}

/// The convention used throughout the crate. Chosen by
/// [`resolve_bit_order`](crate::oracle::resolve_bit_order); the archived
/// report in `data/bit_order_report.json` is checked against it in tests.
pub const LATTICE_BIT_ORDER: BitOrder = BitOrder::MsbHighestQubit;

impl BitOrder {
    pub const ALL: [BitOrder; 2] = [BitOrder::MsbHighestQubit, BitOrder::MsbLowestQubit];

    /// Physical qubit carrying the lattice bit of weight `2^significance`.
    pub fn qubit_for_significance(self, n_qubits: usize, significance: usize) -> usize {
        debug_assert!(significance < n_qubits);
        match self {
            BitOrder::MsbHighestQubit => significance,
            BitOrder::MsbLowestQubit => n_qubits - 1 - significance,
        }
    }

    pub fn lattice_to_amplitude(self, n_qubits: usize, lattice: usize) -> usize {
        match self {
            BitOrder::MsbHighestQubit => lattice,
            BitOrder::MsbLowestQubit => reverse_bits(lattice, n_qubits),
        }
    }

    /// The map is an involution for both conventions.
    pub fn amplitude_to_lattice(self, n_qubits: usize, amplitude: usize) -> usize {
        self.lattice_to_amplitude(n_qubits, amplitude)
    }

    pub fn name(self) -> &'static str {
        match self {
            BitOrder::MsbHighestQubit => "msb_highest_qubit",
            BitOrder::MsbLowestQubit => "msb_lowest_qubit",
        }
    }
}

pub fn reverse_bits(value: usize, width: usize) -> usize {
    (0..width).fold(0, |acc, b| acc | (((value >> b) & 1) << (width - 1 - b)))
}

/// `n`-character binary label of `index`, most significant bit first.
pub fn basis_label(index: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .rev()
        .map(|b| if (index >> b) & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn parse_basis_label(label: &str) -> Option<usize> {
    if label.is_empty() || !label.chars().all(|c| c == '0' || c == '1') {
        return None;
    }
    usize::from_str_radix(label, 2).ok()
}
