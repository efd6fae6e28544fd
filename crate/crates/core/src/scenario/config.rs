use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bit_order::parse_basis_label;
use crate::error::{Error, Result};
use crate::noise::{calibration_from_table, noise_from_calibration, DeviceCalibration, NoiseModel, BUILTIN_DEVICES};
use crate::schema::from_toml;
use crate::tunneling::{CircuitMode, LatticeWavefunction, PotentialSpec, TrotterParams};

const PRESETS: [(&str, &str); 4] = [
    ("free", include_str!("../../presets/free.toml")),
    ("step", include_str!("../../presets/step.toml")),
    ("doublewell", include_str!("../../presets/doublewell.toml")),
    ("multiwell", include_str!("../../presets/multiwell.toml")),
];

/// Device calibration (built-in name or file path) and the device qubit
/// used for each logical qubit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub calibration: String,
    pub assignment: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub n_qubits: usize,
    /// Basis label, most significant bit first.
    pub initial_state: String,
    pub shots: u64,
    pub seed: u64,
    #[serde(default)]
    pub paper_literal: bool,
    pub potential: PotentialSpec,
    pub trotter: TrotterParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseConfig>,
    /// Directory that relative calibration paths are resolved against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = from_toml(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml_str(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    /// A preset name, or else a path to a config file.
    pub fn load(name_or_path: &str) -> Result<Self> {
        match preset(name_or_path) {
            Ok(cfg) => Ok(cfg),
            Err(_) if Path::new(name_or_path).exists() => Self::from_path(Path::new(name_or_path)),
            Err(_) => Err(Error::Config(format!(
                "`{name_or_path}` is neither a preset ({}) nor a readable file",
                preset_names().join(", ")
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let schema = |path: &str, message: String| Error::Schema {
            path: path.into(),
            message,
        };
        if !(2..=3).contains(&self.n_qubits) {
            return Err(schema("n_qubits", format!("must be 2 or 3, got {}", self.n_qubits)));
        }
        if self.initial_state.len() != self.n_qubits || parse_basis_label(&self.initial_state).is_none() {
            return Err(schema(
                "initial_state",
                format!("`{}` is not a {}-bit label", self.initial_state, self.n_qubits),
            ));
        }
        if self.shots == 0 {
            return Err(schema("shots", "must be positive".into()));
        }
        self.potential
            .validate()
            .and_then(|_| self.potential.target_significance(self.n_qubits))
            .map_err(|e| schema("potential", e.to_string()))?;
        self.trotter.validate().map_err(|e| schema("trotter", e.to_string()))?;
        if let Some(noise) = &self.noise {
            if noise.assignment.len() != self.n_qubits {
                return Err(schema(
                    "noise.assignment",
                    format!("needs {} device qubits, got {}", self.n_qubits, noise.assignment.len()),
                ));
            }
        }
        Ok(())
    }

    pub fn mode(&self) -> CircuitMode {
        if self.paper_literal {
            CircuitMode::PaperLiteral
        } else {
            CircuitMode::Exact
        }
    }

    pub fn initial_wavefunction(&self) -> Result<LatticeWavefunction> {
        LatticeWavefunction::from_label(&self.initial_state)
    }

    pub fn calibration(&self) -> Result<Option<DeviceCalibration>> {
        let Some(noise) = &self.noise else {
            return Ok(None);
        };
        if BUILTIN_DEVICES.contains(&noise.calibration.as_str()) {
            return DeviceCalibration::builtin(&noise.calibration).map(Some);
        }
        let mut path = PathBuf::from(&noise.calibration);
        if path.is_relative() {
            if let Some(base) = &self.base_dir {
                path = base.join(path);
            }
        }
        calibration_from_table(&path).map(Some)
    }

    pub fn noise_model(&self) -> Result<Option<NoiseModel>> {
        match (self.calibration()?, &self.noise) {
            (Some(cal), Some(n)) => noise_from_calibration(&cal, &n.assignment).map(Some),
            _ => Ok(None),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

pub fn preset(name: &str) -> Result<ScenarioConfig> {
    let (_, text) = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Config(format!("unknown preset `{name}`")))?;
    ScenarioConfig::from_toml_str(text)
}
