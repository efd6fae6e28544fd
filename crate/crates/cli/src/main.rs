use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qtunnel::export_qasm;
use qtunnel::scenario::{
    fidelity_report, preparation, preset, preset_names, run_scenario, to_json, verify, NoiseConfig,
    ScenarioConfig,
};
use qtunnel::tunneling::trotter_step;
use qtunnel::scenario::cumulative_circuits;
use qtunnel::Circuit;

#[derive(Parser)]
#[command(name = "qtunnel", version, about = "Quantum tunneling on a qubit lattice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario and write CSV, SVG, QASM and JSON outputs.
    Run(ScenarioArgs),
    /// Check the scenario's circuits against the exact propagator. Exit 1 on failure.
    Verify(ScenarioArgs),
    /// Built-in scenarios.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
    /// Write the step circuit and the per-step circuits as OpenQASM 2.0.
    ExportQasm(ScenarioArgs),
}

#[derive(Subcommand)]
enum PresetAction {
    List,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Preset name or path to a scenario TOML file.
    config: String,
    /// Calibration table (file path or built-in device name).
    #[arg(long, value_name = "CALIBRATION")]
    noise: Option<String>,
    /// Device qubit for each logical qubit, e.g. `0,1`.
    #[arg(long, value_name = "Q,...", value_delimiter = ',')]
    assign: Option<Vec<usize>>,
    #[arg(long)]
    seed: Option<u64>,
    /// Use the published circuits instead of the exact construction.
    #[arg(long)]
    paper_literal: bool,
    /// Output directory (default `out/<scenario>`).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

impl ScenarioArgs {
    fn load(&self) -> Result<ScenarioConfig> {
        let mut cfg = ScenarioConfig::load(&self.config)?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if self.paper_literal {
            cfg.paper_literal = true;
        }
        match (&self.noise, &self.assign) {
            (Some(cal), assign) => {
                let assignment = assign
                    .clone()
                    .or_else(|| cfg.noise.as_ref().map(|n| n.assignment.clone()))
                    .unwrap_or_else(|| (0..cfg.n_qubits).collect());
                // a path given on the command line is relative to the caller
                cfg.base_dir = None;
                cfg.noise = Some(NoiseConfig {
                    calibration: cal.clone(),
                    assignment,
                });
            }
            (None, Some(assign)) => match cfg.noise.as_mut() {
                Some(n) => n.assignment = assign.clone(),
                None => bail!("--assign needs a calibration (--noise or a [noise] table)"),
            },
            (None, None) => {}
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn out_dir(&self, cfg: &ScenarioConfig) -> PathBuf {
        self.out.clone().unwrap_or_else(|| Path::new("out").join(&cfg.name))
    }
}

fn run(args: &ScenarioArgs) -> Result<()> {
    let cfg = args.load()?;
    let dir = args.out_dir(&cfg);
    let output = run_scenario(&cfg)?;
    let written = output.write_bundle(&dir)?;
    let noise = cfg.noise_model()?;
    let fid = fidelity_report(&cfg, noise.as_ref())?;
    let fid_path = dir.join("fidelity.json");
    std::fs::write(&fid_path, to_json(&fid)).with_context(|| format!("writing {}", fid_path.display()))?;

    let r = &output.report;
    println!("scenario {} ({:?} mode, {} steps)", r.name, r.mode, r.trotter.steps);
    println!("final distribution:");
    for (label, p) in &r.final_distribution {
        println!("  |{label}>  {p:.6}");
    }
    println!("max deviation vs exact propagation: {:.3e}", r.max_deviation_vs_oracle);
    if let Some(n) = &r.noisy {
        println!("noisy final total variation: {:.4}", n.final_total_variation);
    }
    println!(
        "tomography fidelity ({}): initial {:.4}, final {:.4}",
        fid.convention, fid.initial_noiseless, fid.final_noiseless
    );
    println!("wrote {} files to {}", written.len() + 1, dir.display());
    Ok(())
}

fn run_verify(args: &ScenarioArgs) -> Result<bool> {
    let cfg = args.load()?;
    let report = verify(&cfg, None)?;
    for c in &report.checks {
        let status = match (c.applicable, c.passed) {
            (false, _) => "N/A ",
            (true, true) => "PASS",
            (true, false) => "FAIL",
        };
        println!("[{status}] {:<18} value {:.4e}  threshold {:.4e}  {}", c.name, c.value, c.threshold, c.detail);
    }
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join("verify.json");
        std::fs::write(&path, to_json(&report)).with_context(|| format!("writing {}", path.display()))?;
    }
    println!("{}", if report.passed { "verify: pass" } else { "verify: FAIL" });
    Ok(report.passed)
}

fn export(args: &ScenarioArgs) -> Result<()> {
    let cfg = args.load()?;
    let dir = args.out_dir(&cfg);
    let step = trotter_step(&cfg.potential, cfg.n_qubits, &cfg.trotter, cfg.mode())?;
    let circuits: Vec<Circuit> = cumulative_circuits(&preparation(&cfg.initial_state)?, &step, cfg.trotter.steps)?;
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut files = vec![("trotter_step.qasm".to_string(), export_qasm(&step))];
    for (t, c) in circuits.iter().enumerate() {
        files.push((format!("circuit_step_{t}.qasm"), export_qasm(c)));
    }
    for (name, text) in &files {
        let path = dir.join(name);
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    println!("wrote {} QASM files to {}", files.len(), dir.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(a) => run(a).map(|_| true),
        Command::Verify(a) => run_verify(a),
        Command::ExportQasm(a) => export(a).map(|_| true),
        Command::Presets {
            action: PresetAction::List,
        } => {
            for name in preset_names() {
                let p = preset(name).expect("built-in preset parses");
                println!(
                    "{name:<11} n={} {} v={} steps={} initial |{}>",
                    p.n_qubits,
                    p.potential.kind.name(),
                    p.potential.v,
                    p.trotter.steps,
                    p.initial_state
                );
            }
            Ok(true)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
