use crate::bit_order::{parse_basis_label, LATTICE_BIT_ORDER};
use crate::error::{Error, Result};
use crate::state::StateVector;

/// Wavefunction sampled at `x_k = (k + ½)Δl`, `Δl = L / 2^n`.
/// `L` defaults to `2^n` so that `Δl = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeWavefunction {
    length: f64,
    state: StateVector,
}

impl LatticeWavefunction {
    pub fn new(state: StateVector) -> Self {
        let length = state.dim() as f64;
        LatticeWavefunction { length, state }
    }

    pub fn with_length(state: StateVector, length: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidArgument(format!("domain length must be positive, got {length}")));
        }
        Ok(LatticeWavefunction { length, state })
    }

    /// Particle localized on the site written as a binary label, most
    /// significant bit first (`"100"` is site 4 of 8).
    pub fn from_label(label: &str) -> Result<Self> {
        let site = parse_basis_label(label)
            .ok_or_else(|| Error::InvalidArgument(format!("bad basis label `{label}`")))?;
        let n = label.len();
        let index = LATTICE_BIT_ORDER.lattice_to_amplitude(n, site);
        Ok(Self::new(StateVector::basis(n, index)?))
    }

    pub fn n_qubits(&self) -> usize {
        self.state.n_qubits()
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.state.dim() as f64
    }

    pub fn positions(&self) -> Vec<f64> {
        let dl = self.spacing();
        (0..self.state.dim()).map(|k| (k as f64 + 0.5) * dl).collect()
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    /// `|ψ(x_k)|²` indexed by site.
    pub fn probabilities(&self) -> Vec<f64> {
        lattice_probabilities(&self.state)
    }
}

pub(crate) fn lattice_probabilities(state: &StateVector) -> Vec<f64> {
    let n = state.n_qubits();
    let amp = state.probabilities();
    (0..amp.len())
        .map(|k| amp[LATTICE_BIT_ORDER.lattice_to_amplitude(n, k)])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_spacing_is_one() {
        let w = LatticeWavefunction::from_label("01").unwrap();
        assert_eq!(w.spacing(), 1.0);
        assert_eq!(w.positions(), vec![0.5, 1.5, 2.5, 3.5]);
        assert_eq!(w.probabilities(), vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn custom_length() {
        let w = LatticeWavefunction::with_length(StateVector::zero(3).unwrap(), 2.0).unwrap();
        assert_eq!(w.spacing(), 0.25);
        assert_eq!(w.positions()[7], 1.875);
        assert!(LatticeWavefunction::with_length(StateVector::zero(1).unwrap(), 0.0).is_err());
    }

    #[test]
    fn label_is_msb_first() {
        let w = LatticeWavefunction::from_label("100").unwrap();
        assert_eq!(w.probabilities()[4], 1.0);
        assert!(LatticeWavefunction::from_label("1a0").is_err());
    }
}
