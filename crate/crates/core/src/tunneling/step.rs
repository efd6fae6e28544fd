use serde::{Deserialize, Serialize};

use crate::bit_order::{reverse_bits, LATTICE_BIT_ORDER};
use crate::circuit::{build_paper_iqft, build_qft_unswapped, Circuit};
use crate::error::{Error, Result};
use crate::gate::GateOp;
use crate::state::StateVector;

use super::kinetic::{build_paper_d, kinetic_phase_diagonal};
use super::lattice::{lattice_probabilities, LatticeWavefunction};
use super::potential::{build_potential, PotentialSpec};
use super::synth::synthesize_diagonal;

/// Time step, particle mass and number of steps (`ħ = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrotterParams {
    pub dt: f64,
    pub mass: f64,
    pub steps: usize,
}

impl TrotterParams {
    pub const REFERENCE_DT: f64 = 0.1;
    pub const REFERENCE_MASS: f64 = 0.5;

    pub fn new(dt: f64, mass: f64, steps: usize) -> Result<Self> {
        let p = TrotterParams { dt, mass, steps };
        p.validate()?;
        Ok(p)
    }

    /// `dt > 0`, `mass > 0`, both finite.
    pub fn validate(&self) -> Result<()> {
        self.check_physical()?;
        if self.dt <= 0.0 {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {}", self.dt)));
        }
        Ok(())
    }

    /// Weaker check used by the pure operator builders, which accept `dt = 0`.
    pub(crate) fn check_physical(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt >= 0.0) {
            return Err(Error::InvalidArgument(format!("bad time step {}", self.dt)));
        }
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(Error::InvalidArgument(format!("mass must be positive, got {}", self.mass)));
        }
        Ok(())
    }
}

/// How a Trotter step is turned into gates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitMode {
    /// Potential angle `2 v dt`; kinetic block equal to `F·D·F†` with `D`
    /// synthesized from the momentum grid. Any `n`.
    #[default]
    Exact,
    /// Potential angle `v dt`; published two- and three-qubit transform and
    /// diagonal circuits, `D` angles rescaled by `(dt/0.1)(0.5/m)`.
    PaperLiteral,
}

/// Execution order: potential, then the kinetic block.
pub fn trotter_step(
    spec: &PotentialSpec,
    n: usize,
    params: &TrotterParams,
    mode: CircuitMode,
) -> Result<Circuit> {
    let p = build_potential(spec, n, params, mode)?;
    let k = kinetic_block(n, params, mode)?;
    Ok(p.then(&k)?.with_label(format!("trotter_step_{}", spec.kind.name())))
}

/// The kinetic part of a step.
pub fn kinetic_block(n: usize, params: &TrotterParams, mode: CircuitMode) -> Result<Circuit> {
    match mode {
        CircuitMode::Exact => exact_kinetic_block(n, params),
        CircuitMode::PaperLiteral => {
            let d = scaled_phases(&build_paper_d(n)?, literal_d_scale(params))?;
            paper_kinetic_block_with(&d)
        }
    }
}

/// Published transform, the given diagonal, then the transform's inverse.
pub fn paper_kinetic_block_with(d: &Circuit) -> Result<Circuit> {
    let t = build_paper_iqft(d.n_qubits())?;
    Ok(t.clone().then(d)?.then(&t.inverse())?.with_label("paper_kinetic"))
}

fn literal_d_scale(params: &TrotterParams) -> f64 {
    (params.dt / TrotterParams::REFERENCE_DT) * (TrotterParams::REFERENCE_MASS / params.mass)
}

fn scaled_phases(c: &Circuit, factor: f64) -> Result<Circuit> {
    if factor == 1.0 {
        return Ok(c.clone());
    }
    let gates = c.gates().iter().map(|g| match *g {
        GateOp::Rz { target, theta } => GateOp::rz(target, theta * factor),
        GateOp::Cu1 {
            control,
            target,
            lambda,
        } => GateOp::cu1(control, target, lambda * factor),
        other => other,
    });
    Circuit::from_gates(c.n_qubits(), c.label(), gates)
}

/// `(R·F†) · (R·D·R) · (F·R)` in matrix order, which equals `F·D·F†` with
/// `R` the bit reversal. Avoids the swap networks of the full transforms.
fn exact_kinetic_block(n: usize, params: &TrotterParams) -> Result<Circuit> {
    let ladder = build_qft_unswapped(n)?; // R·F
    // R·F† : same gate order, every angle negated
    let to_momentum = Circuit::from_gates(n, "iqft_rev", ladder.gates().iter().map(GateOp::inverse))?;
    // F·R : reversed gate order (the gates are symmetric matrices)
    let from_momentum = Circuit::from_gates(n, "qft_rev", ladder.gates().iter().rev().copied())?;

    let d = kinetic_phase_diagonal(n, params)?;
    let mut amp = d.clone();
    for (site, slot) in (0..d.len()).map(|k| (k, LATTICE_BIT_ORDER.lattice_to_amplitude(n, k))) {
        amp[slot] = d[reverse_bits(site, n)];
    }
    let diag = synthesize_diagonal(&amp)?;

    Ok(to_momentum
        .then(&diag)?
        .then(&from_momentum)?
        .with_label("kinetic"))
}

/// States after `0..=steps` applications of the step circuit.
pub fn evolve_states(
    initial: &LatticeWavefunction,
    spec: &PotentialSpec,
    params: &TrotterParams,
    mode: CircuitMode,
) -> Result<Vec<StateVector>> {
    params.validate()?;
    let step = trotter_step(spec, initial.n_qubits(), params, mode)?;
    let mut state = initial.state().clone();
    let mut out = Vec::with_capacity(params.steps + 1);
    out.push(state.clone());
    for _ in 0..params.steps {
        state.run(&step)?;
        out.push(state.clone());
    }
    Ok(out)
}

/// Site probabilities after each step; row 0 is the initial distribution.
pub fn evolve(
    initial: &LatticeWavefunction,
    spec: &PotentialSpec,
    params: &TrotterParams,
    mode: CircuitMode,
) -> Result<Vec<Vec<f64>>> {
    Ok(evolve_states(initial, spec, params, mode)?
        .iter()
        .map(lattice_probabilities)
        .collect())
}
