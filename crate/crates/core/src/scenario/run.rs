use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bit_order::{basis_label, LATTICE_BIT_ORDER};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::GateOp;
use crate::noise::{noisy_run, total_variation, NoiseModel};
use crate::oracle::{exact_hamiltonian, exact_propagator, DenseOperator};
use crate::qasm::export_qasm;
use crate::state::{ShotCounts, StateVector};
use crate::tomography::run_tomography;
use crate::tunneling::{trotter_step, CircuitMode, LatticeWavefunction, PotentialKind, PotentialSpec, TrotterParams};

use super::config::ScenarioConfig;
use super::emit::{csv_string, svg_string, ProbabilitySeries};

pub const FIDELITY_CONVENTION: &str = "squared Uhlmann, (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2";

#[derive(Clone, Debug, PartialEq)]
pub struct NoisySeries {
    pub series: ProbabilitySeries,
    pub counts: Vec<ShotCounts>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateCount {
    pub total: usize,
    pub two_qubit: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub name: String,
    pub n_qubits: usize,
    pub potential: PotentialSpec,
    pub trotter: TrotterParams,
    pub initial_state: String,
    pub mode: CircuitMode,
    pub bit_order: String,
    pub shots: u64,
    pub seed: u64,
    pub step_gates: GateCount,
    /// Largest site-probability gap between the circuit series and `e^{-iHt}`.
    pub max_deviation_vs_oracle: f64,
    pub alternate_mode: CircuitMode,
    pub alternate_max_deviation_vs_oracle: f64,
    pub final_distribution: Vec<(String, f64)>,
    pub final_argmax: String,
    pub oracle_final_argmax: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noisy: Option<NoisySummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoisySummary {
    pub calibration: String,
    pub assignment: Vec<usize>,
    pub final_total_variation: f64,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioOutput {
    pub config: ScenarioConfig,
    pub circuit: ProbabilitySeries,
    pub alternate: ProbabilitySeries,
    pub oracle: ProbabilitySeries,
    pub noisy: Option<NoisySeries>,
    pub trotter_step: Circuit,
    /// Basis-state preparation followed by `t` steps, for `t = 0..=steps`.
    pub step_circuits: Vec<Circuit>,
    pub report: ScenarioReport,
}

fn other_mode(mode: CircuitMode) -> CircuitMode {
    match mode {
        CircuitMode::Exact => CircuitMode::PaperLiteral,
        CircuitMode::PaperLiteral => CircuitMode::Exact,
    }
}

/// X gates taking `|0…0⟩` to the labelled basis state.
pub fn preparation(label: &str) -> Result<Circuit> {
    let wf = LatticeWavefunction::from_label(label)?;
    let n = wf.n_qubits();
    let site = label.chars().fold(0usize, |acc, c| acc * 2 + usize::from(c == '1'));
    let amp = LATTICE_BIT_ORDER.lattice_to_amplitude(n, site);
    let gates = (0..n).filter(|q| (amp >> q) & 1 == 1).map(GateOp::x);
    Circuit::from_gates(n, format!("prepare_{label}"), gates)
}

/// Cumulative circuits: preparation, then `t` copies of `step`.
pub fn cumulative_circuits(prep: &Circuit, step: &Circuit, steps: usize) -> Result<Vec<Circuit>> {
    let mut out = Vec::with_capacity(steps + 1);
    let mut c = prep.clone().with_label("circuit_step_0");
    out.push(c.clone());
    for t in 1..=steps {
        c.append(step)?;
        out.push(c.clone().with_label(format!("circuit_step_{t}")));
    }
    Ok(out)
}

pub(crate) fn lattice_row(state: &StateVector) -> Vec<f64> {
    LatticeWavefunction::new(state.clone()).probabilities()
}

/// Reorders an amplitude-indexed distribution into lattice order.
pub(crate) fn lattice_order(n: usize, amplitude_order: &[f64]) -> Vec<f64> {
    (0..amplitude_order.len())
        .map(|site| amplitude_order[LATTICE_BIT_ORDER.lattice_to_amplitude(n, site)])
        .collect()
}

pub(crate) fn circuit_series(config: &ScenarioConfig, mode: CircuitMode) -> Result<(Circuit, ProbabilitySeries)> {
    let n = config.n_qubits;
    let step = trotter_step(&config.potential, n, &config.trotter, mode)?;
    let mut state = config.initial_wavefunction()?.state().clone();
    let mut rows = vec![lattice_row(&state)];
    for _ in 0..config.trotter.steps {
        state.run(&step)?;
        rows.push(lattice_row(&state));
    }
    Ok((step, ProbabilitySeries::new(n, rows)?))
}

/// Repeated application of `e^{-iH dt}` to the initial state.
pub fn oracle_series(config: &ScenarioConfig) -> Result<ProbabilitySeries> {
    let n = config.n_qubits;
    let h = exact_hamiltonian(&config.potential, n, config.trotter.mass)?;
    let u: DenseOperator = exact_propagator(&h, config.trotter.dt)?;
    let mut state = config.initial_wavefunction()?.state().clone();
    let mut rows = vec![lattice_row(&state)];
    for _ in 0..config.trotter.steps {
        state = u.apply(&state)?;
        rows.push(lattice_row(&state));
    }
    ProbabilitySeries::new(n, rows)
}

/// Shot-estimated series, one independent run per step with seed `seed + t`.
pub fn noisy_series(config: &ScenarioConfig, circuits: &[Circuit], noise: &NoiseModel) -> Result<NoisySeries> {
    let n = config.n_qubits;
    let zero = StateVector::zero(n)?;
    let mut counts = Vec::with_capacity(circuits.len());
    let mut rows = Vec::with_capacity(circuits.len());
    for (t, c) in circuits.iter().enumerate() {
        let k = noisy_run(c, &zero, noise, config.shots, config.seed.wrapping_add(t as u64))?;
        rows.push(lattice_order(n, &k.frequencies()));
        counts.push(k);
    }
    Ok(NoisySeries {
        series: ProbabilitySeries::new(n, rows)?,
        counts,
    })
}

fn argmax_label(n: usize, row: &[f64]) -> String {
    let k = row
        .iter()
        .enumerate()
        .fold(0, |best, (i, &p)| if p > row[best] { i } else { best });
    basis_label(k, n)
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioOutput> {
    config.validate()?;
    let n = config.n_qubits;
    let mode = config.mode();
    let (step, circuit) = circuit_series(config, mode)?;
    let alt_mode = other_mode(mode);
    let (_, alternate) = circuit_series(config, alt_mode)?;
    let oracle = oracle_series(config)?;
    let step_circuits = cumulative_circuits(&preparation(&config.initial_state)?, &step, config.trotter.steps)?;

    let noisy = match config.noise_model()? {
        Some(model) => Some(noisy_series(config, &step_circuits, &model)?),
        None => None,
    };
    let noisy_summary = match (&noisy, &config.noise) {
        (Some(ns), Some(nc)) => Some(NoisySummary {
            calibration: nc.calibration.clone(),
            assignment: nc.assignment.clone(),
            final_total_variation: total_variation(ns.series.last(), circuit.last()),
            max_deviation: ns.series.max_deviation(&circuit),
        }),
        _ => None,
    };

    let labels = circuit.labels();
    let report = ScenarioReport {
        name: config.name.clone(),
        n_qubits: n,
        potential: config.potential,
        trotter: config.trotter,
        initial_state: config.initial_state.clone(),
        mode,
        bit_order: LATTICE_BIT_ORDER.name().to_string(),
        shots: config.shots,
        seed: config.seed,
        step_gates: GateCount {
            total: step.len(),
            two_qubit: step.two_qubit_count(),
        },
        max_deviation_vs_oracle: circuit.max_deviation(&oracle),
        alternate_mode: alt_mode,
        alternate_max_deviation_vs_oracle: alternate.max_deviation(&oracle),
        final_distribution: labels.iter().cloned().zip(circuit.last().iter().copied()).collect(),
        final_argmax: argmax_label(n, circuit.last()),
        oracle_final_argmax: argmax_label(n, oracle.last()),
        noisy: noisy_summary,
    };

    Ok(ScenarioOutput {
        config: config.clone(),
        circuit,
        alternate,
        oracle,
        noisy,
        trotter_step: step,
        step_circuits,
        report,
    })
}

/// Tomography fidelities of the prepared and the final state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub scenario: String,
    pub convention: String,
    pub shots_per_setting: u64,
    pub initial_noiseless: f64,
    pub final_noiseless: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_noisy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_noisy: Option<f64>,
    /// Published hardware fidelities (initial, final) for comparison only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hardware_context: Option<(f64, f64)>,
}

fn hardware_context(config: &ScenarioConfig) -> Option<(f64, f64)> {
    match (config.n_qubits, config.potential.kind) {
        (2, PotentialKind::Free) => Some((0.9679, 0.9383)),
        (2, PotentialKind::DoubleWell) => Some((0.9561, 0.9518)),
        _ => None,
    }
}

pub fn fidelity_report(config: &ScenarioConfig, noise: Option<&NoiseModel>) -> Result<FidelityReport> {
    config.validate()?;
    let n = config.n_qubits;
    let prep = preparation(&config.initial_state)?;
    let step = trotter_step(&config.potential, n, &config.trotter, config.mode())?;
    let last = cumulative_circuits(&prep, &step, config.trotter.steps)?
        .pop()
        .ok_or_else(|| Error::Contract("no final circuit".into()))?;
    let zero = StateVector::zero(n)?;
    let clean = NoiseModel::noiseless(n);
    let tomo = |c: &Circuit, model: &NoiseModel, salt: u64| {
        run_tomography(c, &zero, model, config.shots, config.seed.wrapping_add(salt)).map(|r| r.fidelity_vs_ideal)
    };
    let (initial_noisy, final_noisy) = match noise {
        Some(model) => (Some(tomo(&prep, model, 2)?), Some(tomo(&last, model, 3)?)),
        None => (None, None),
    };
    Ok(FidelityReport {
        scenario: config.name.clone(),
        convention: FIDELITY_CONVENTION.to_string(),
        shots_per_setting: config.shots,
        initial_noiseless: tomo(&prep, &clean, 0)?,
        final_noiseless: tomo(&last, &clean, 1)?,
        initial_noisy,
        final_noisy,
        hardware_context: hardware_context(config),
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

impl ScenarioOutput {
    /// Writes CSV series, SVG charts, QASM files and `report.json` into `dir`.
    pub fn write_bundle(&self, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let name = &self.config.name;
        let mut files = vec![
            ("probabilities.csv".to_string(), csv_string(&self.circuit)),
            ("probabilities_alternate.csv".to_string(), csv_string(&self.alternate)),
            ("oracle.csv".to_string(), csv_string(&self.oracle)),
            (
                "probabilities.svg".to_string(),
                svg_string(&self.circuit, &format!("{name}: site probabilities per step")),
            ),
            (
                "oracle.svg".to_string(),
                svg_string(&self.oracle, &format!("{name}: exact propagation")),
            ),
            ("trotter_step.qasm".to_string(), export_qasm(&self.trotter_step)),
            ("config.toml".to_string(), self.config.to_toml()),
            ("report.json".to_string(), to_json(&self.report)),
        ];
        if let Some(noisy) = &self.noisy {
            files.push(("noisy.csv".to_string(), csv_string(&noisy.series)));
            files.push((
                "noisy.svg".to_string(),
                svg_string(&noisy.series, &format!("{name}: noisy shot estimates")),
            ));
        }
        for (t, c) in self.step_circuits.iter().enumerate() {
            files.push((format!("circuit_step_{t}.qasm"), export_qasm(c)));
        }
        let mut written = Vec::with_capacity(files.len());
        for (file, text) in files {
            let path = dir.join(file);
            write(&path, &text)?;
            written.push(path);
        }
        Ok(written)
    }
}
