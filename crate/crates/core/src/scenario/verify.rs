use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::GateOp;
use crate::oracle::{
    circuit_matrix, commutator_norm, exact_propagator, kinetic_operator, phase_aligned_distance,
    potential_operator, split_step_operator, DenseOperator,
};
use crate::qasm::{export_qasm, import_qasm};
use crate::state::StateVector;
use crate::tunneling::{trotter_step, CircuitMode, PotentialKind, TrotterParams};

use super::config::ScenarioConfig;
use super::run::{cumulative_circuits, lattice_row, preparation};

const DECOMPOSITION_TOL: f64 = 1e-9;
const ROW_SUM_TOL: f64 = 1e-9;
const ROUND_TRIP_TOL: f64 = 1e-9;
const ORDER_RANGE: (f64, f64) = (0.7, 1.3);

/// Replaces every phase angle of magnitude `from` (within `1e-9`) by
/// `to`, keeping its sign.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleMutation {
    pub from: f64,
    pub to: f64,
}

impl AngleMutation {
    pub fn apply(&self, c: &Circuit) -> Result<Circuit> {
        let swap = |a: f64| {
            if (a.abs() - self.from).abs() < 1e-9 {
                self.to.copysign(a)
            } else {
                a
            }
        };
        let mut hits = 0;
        let gates: Vec<GateOp> = c
            .gates()
            .iter()
            .map(|g| {
                let m = match *g {
                    GateOp::Rz { target, theta } => GateOp::rz(target, swap(theta)),
                    GateOp::U1 { target, lambda } => GateOp::u1(target, swap(lambda)),
                    GateOp::Cu1 {
                        control,
                        target,
                        lambda,
                    } => GateOp::cu1(control, target, swap(lambda)),
                    other => other,
                };
                if m != *g {
                    hits += 1;
                }
                m
            })
            .collect();
        if hits == 0 {
            return Err(Error::InvalidArgument(format!(
                "no gate angle of magnitude {} in `{}`",
                self.from,
                c.label()
            )));
        }
        Circuit::from_gates(c.n_qubits(), c.label(), gates)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// `false` when the check does not apply to this scenario.
    pub applicable: bool,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed,
            applicable: true,
            value,
            threshold,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub scenario: String,
    pub mode: CircuitMode,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

/// Weight of `V` inside one step of `mode`.
fn potential_weight(mode: CircuitMode) -> f64 {
    match mode {
        CircuitMode::Exact => 1.0,
        CircuitMode::PaperLiteral => 0.5,
    }
}

/// `K + w·V`, the generator a step of `mode` approximates.
fn mode_hamiltonian(config: &ScenarioConfig, mode: CircuitMode) -> Result<DenseOperator> {
    let n = config.n_qubits;
    let k = kinetic_operator(n, config.trotter.mass)?;
    let v = potential_operator(&config.potential, n)?;
    DenseOperator::new(n, k.entries() + v.entries().scale(potential_weight(mode)))
}

/// Least-squares slope of `ln y` against `ln x`.
fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let m = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / m, ly.iter().sum::<f64>() / m);
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    cov / var
}

/// Global error at fixed total time for `dt`, `dt/2`, `dt/4`.
pub(crate) fn global_errors(config: &ScenarioConfig, mode: CircuitMode) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = config.n_qubits;
    let p = config.trotter;
    let total = p.dt * p.steps as f64;
    let exact = exact_propagator(&mode_hamiltonian(config, mode)?, total)?;
    let mut dts = Vec::new();
    let mut errs = Vec::new();
    for j in 0..3u32 {
        let scale = 1usize << j;
        let params = TrotterParams::new(p.dt / scale as f64, p.mass, p.steps * scale)?;
        let u = circuit_matrix(&trotter_step(&config.potential, n, &params, mode)?)?.powi(params.steps);
        dts.push(params.dt);
        errs.push(phase_aligned_distance(&u, &exact)?);
    }
    Ok((dts, errs))
}

/// Oracle comparisons and invariants for one scenario, noiseless.
pub fn verify(config: &ScenarioConfig, mutation: Option<AngleMutation>) -> Result<VerifyReport> {
    config.validate()?;
    let n = config.n_qubits;
    let mode = config.mode();
    let params = config.trotter;
    let mut step = trotter_step(&config.potential, n, &params, mode)?;
    if let Some(m) = mutation {
        step = m.apply(&step)?;
    }
    let mut checks = Vec::new();

    let u_step = circuit_matrix(&step)?;
    let split = split_step_operator(&config.potential, n, &params, mode)?;
    let d = phase_aligned_distance(&u_step, &split)?;
    checks.push(CheckResult::new(
        "decomposition",
        d < DECOMPOSITION_TOL,
        d,
        DECOMPOSITION_TOL,
        "step circuit vs e^{-iK dt} e^{-iV dt}",
    ));

    let w = potential_weight(mode);
    let comm = w * commutator_norm(&config.potential, n, params.mass)?;
    let bound = 0.5 * params.dt * params.dt * comm;
    let exact_step = exact_propagator(&mode_hamiltonian(config, mode)?, params.dt)?;
    let trotter = phase_aligned_distance(&split, &exact_step)?;
    checks.push(CheckResult::new(
        "trotter_bound",
        trotter <= bound + 1e-12,
        trotter,
        bound,
        "split step vs e^{-iH dt}, bound dt^2/2 ||[K,V]||",
    ));

    let mut state = StateVector::zero(n)?;
    state.run(&preparation(&config.initial_state)?)?;
    let mut exact_state = state.clone();
    let mut rows = vec![lattice_row(&state)];
    let mut oracle_gap: f64 = 0.0;
    for _ in 0..params.steps {
        state.run(&step)?;
        exact_state = exact_step.apply(&exact_state)?;
        let row = lattice_row(&state);
        let ex = lattice_row(&exact_state);
        oracle_gap = row.iter().zip(&ex).map(|(a, b)| (a - b).abs()).fold(oracle_gap, f64::max);
        rows.push(row);
    }
    let worst_sum = rows
        .iter()
        .map(|r| (r.iter().sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    checks.push(CheckResult::new(
        "probability_rows",
        worst_sum <= ROW_SUM_TOL,
        worst_sum,
        ROW_SUM_TOL,
        "|sum(p) - 1| over every step",
    ));

    let agreement_tol = 2.0 * params.steps as f64 * bound + 1e-9;
    checks.push(CheckResult::new(
        "oracle_agreement",
        oracle_gap <= agreement_tol,
        oracle_gap,
        agreement_tol,
        "max site-probability gap to e^{-iHt}",
    ));

    let (dts, errs) = global_errors(config, mode)?;
    let order = if config.potential.kind == PotentialKind::Free || errs.iter().all(|e| *e < 1e-9) {
        CheckResult {
            applicable: false,
            ..CheckResult::new("error_order", true, f64::NAN, ORDER_RANGE.0, "K and V commute; no splitting error")
        }
    } else {
        let slope = log_slope(&dts, &errs);
        CheckResult::new(
            "error_order",
            (ORDER_RANGE.0..=ORDER_RANGE.1).contains(&slope),
            slope,
            ORDER_RANGE.0,
            format!(
                "fitted exponent over dt {:?}, errors {:?}, accepted [{}, {}]",
                dts, errs, ORDER_RANGE.0, ORDER_RANGE.1
            ),
        )
    };
    checks.push(order);

    let circuits = cumulative_circuits(&preparation(&config.initial_state)?, &step, params.steps)?;
    let mut round_trip: f64 = 0.0;
    for (c, row) in circuits.iter().zip(&rows) {
        let back = import_qasm(&export_qasm(c))?;
        let mut s = StateVector::zero(n)?;
        s.run(&back)?;
        round_trip = lattice_row(&s)
            .iter()
            .zip(row)
            .map(|(a, b)| (a - b).abs())
            .fold(round_trip, f64::max);
    }
    checks.push(CheckResult::new(
        "qasm_round_trip",
        round_trip <= ROUND_TRIP_TOL,
        round_trip,
        ROUND_TRIP_TOL,
        "re-imported step circuits vs simulated series",
    ));

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        scenario: config.name.clone(),
        mode,
        checks,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_power_law() {
        let xs = [0.1, 0.05, 0.025];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powi(2)).collect();
        assert!((log_slope(&xs, &ys) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mutation_without_match_is_an_error() {
        let c = Circuit::from_gates(1, "c", [GateOp::h(0)]).unwrap();
        let m = AngleMutation { from: 1.0, to: 2.0 };
        assert!(m.apply(&c).is_err());
    }

    #[test]
    fn mutation_keeps_sign() {
        let c = Circuit::from_gates(1, "c", [GateOp::rz(0, -1.0), GateOp::u1(0, 1.0)]).unwrap();
        let m = AngleMutation { from: 1.0, to: 2.0 }.apply(&c).unwrap();
        assert_eq!(m.gates(), &[GateOp::rz(0, -2.0), GateOp::u1(0, 2.0)]);
    }
}
