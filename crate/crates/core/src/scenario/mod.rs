//! Scenario configuration, the end-to-end runner, and its file outputs.

mod config;
mod emit;
mod run;
mod verify;

pub use config::{preset, preset_names, NoiseConfig, ScenarioConfig};
pub use emit::{csv_string, emit_csv, emit_svg_bars, format_sig12, svg_string, ProbabilitySeries};
pub use run::{
    cumulative_circuits, fidelity_report, noisy_series, oracle_series, preparation, run_scenario, to_json,
    FidelityReport, GateCount, NoisySeries, NoisySummary, ScenarioOutput, ScenarioReport, FIDELITY_CONVENTION,
};
pub use verify::{verify, AngleMutation, CheckResult, VerifyReport};
