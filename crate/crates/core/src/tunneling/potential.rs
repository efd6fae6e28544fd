use serde::{Deserialize, Serialize};

use crate::bit_order::LATTICE_BIT_ORDER;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::GateOp;

use super::step::{CircuitMode, TrotterParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialKind {
    Free,
    Step,
    #[serde(alias = "double_well")]
    DoubleWell,
    #[serde(alias = "multi_well")]
    MultiWell,
}

impl PotentialKind {
    /// How many places below the most significant lattice bit the `σ_z`
    /// sits; `None` for the free particle.
    fn offset_from_top(self) -> Option<usize> {
        match self {
            PotentialKind::Free => None,
            PotentialKind::Step => Some(0),
            PotentialKind::DoubleWell => Some(1),
            PotentialKind::MultiWell => Some(2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PotentialKind::Free => "free",
            PotentialKind::Step => "step",
            PotentialKind::DoubleWell => "doublewell",
            PotentialKind::MultiWell => "multiwell",
        }
    }
}

/// `V = v σ_z` on one lattice bit: `+v` on sites where that bit is 0, `-v`
/// where it is 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    #[serde(default)]
    pub v: f64,
}

impl PotentialSpec {
    pub fn new(kind: PotentialKind, v: f64) -> Result<Self> {
        let spec = PotentialSpec { kind, v };
        spec.validate()?;
        Ok(spec)
    }

    pub fn free() -> Self {
        PotentialSpec {
            kind: PotentialKind::Free,
            v: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.v.is_finite() {
            return Err(Error::InvalidArgument(format!("potential strength {} is not finite", self.v)));
        }
        if self.kind == PotentialKind::Free && self.v != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "free particle needs v = 0, got {}",
                self.v
            )));
        }
        Ok(())
    }

    /// Lattice bit (weight `2^s`) carrying `σ_z`: `n-1` for a step, `n-2` for
    /// a double well, `n-3` for a multi-well.
    pub fn target_significance(&self, n: usize) -> Result<Option<usize>> {
        match self.kind.offset_from_top() {
            None => Ok(None),
            Some(off) if off < n => Ok(Some(n - 1 - off)),
            Some(off) => Err(Error::InvalidArgument(format!(
                "{} potential needs at least {} qubits, got {n}",
                self.kind.name(),
                off + 1
            ))),
        }
    }

    /// Physical qubit carrying `σ_z` under the crate bit order.
    pub fn target_qubit(&self, n: usize) -> Result<Option<usize>> {
        Ok(self
            .target_significance(n)?
            .map(|s| LATTICE_BIT_ORDER.qubit_for_significance(n, s)))
    }
}

/// `Rz` angle realizing `e^{-i v σ_z dt}`: `2 v dt`, or `v dt` in
/// paper-literal mode.
pub(crate) fn potential_angle(spec: &PotentialSpec, params: &TrotterParams, mode: CircuitMode) -> f64 {
    match mode {
        CircuitMode::Exact => 2.0 * spec.v * params.dt,
        CircuitMode::PaperLiteral => spec.v * params.dt,
    }
}

/// Single `Rz` on the rule-selected qubit; empty for a free particle.
pub fn build_potential(
    spec: &PotentialSpec,
    n: usize,
    params: &TrotterParams,
    mode: CircuitMode,
) -> Result<Circuit> {
    spec.validate()?;
    params.check_physical()?;
    let mut c = Circuit::new(n, format!("p_{}", spec.kind.name()));
    if let Some(q) = spec.target_qubit(n)? {
        c.push(GateOp::rz(q, potential_angle(spec, params, mode)))?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> TrotterParams {
        TrotterParams::new(0.1, 0.5, 6).unwrap()
    }

    #[test]
    fn free_is_empty() {
        let c = build_potential(&PotentialSpec::free(), 2, &p(), CircuitMode::Exact).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn free_with_strength_rejected() {
        assert!(PotentialSpec::new(PotentialKind::Free, 1.0).is_err());
    }

    #[test]
    fn step_targets_top_qubit() {
        let spec = PotentialSpec::new(PotentialKind::Step, 50.0).unwrap();
        let c = build_potential(&spec, 2, &p(), CircuitMode::Exact).unwrap();
        assert_eq!(c.gates(), &[GateOp::rz(1, 10.0)]);
        let c = build_potential(&spec, 2, &p(), CircuitMode::PaperLiteral).unwrap();
        assert_eq!(c.gates(), &[GateOp::rz(1, 5.0)]);
    }

    #[test]
    fn target_rule() {
        let dw = PotentialSpec::new(PotentialKind::DoubleWell, 50.0).unwrap();
        assert_eq!(dw.target_qubit(2).unwrap(), Some(0));
        let mw = PotentialSpec::new(PotentialKind::MultiWell, 10.0).unwrap();
        assert_eq!(mw.target_qubit(3).unwrap(), Some(0));
        assert_eq!(mw.target_qubit(4).unwrap(), Some(1));
        assert!(mw.target_qubit(2).is_err());
    }

    #[test]
    fn kind_names_parse() {
        let k: PotentialKind = serde_json::from_str("\"double_well\"").unwrap();
        assert_eq!(k, PotentialKind::DoubleWell);
        let k: PotentialKind = serde_json::from_str("\"multiwell\"").unwrap();
        assert_eq!(k, PotentialKind::MultiWell);
    }
}
