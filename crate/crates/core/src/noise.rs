//! Device calibration tables and Monte-Carlo depolarizing noise.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::{pauli_y, pauli_z, GateOp};
use crate::schema::{check_probability, from_toml};
use crate::state::{ShotCounts, StateVector};

const IBMQX4: &str = include_str!("../data/ibmqx4.toml");
const MELBOURNE: &str = include_str!("../data/melbourne.toml");

pub const BUILTIN_DEVICES: [&str; 2] = ["ibmqx4", "melbourne"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitCalibration {
    pub index: usize,
    pub frequency_ghz: f64,
    pub t1_us: f64,
    pub t2_us: f64,
    #[serde(default)]
    pub u1_error: f64,
    pub u2_error: f64,
    pub u3_error: f64,
    pub readout_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairCalibration {
    pub control: usize,
    pub target: usize,
    pub cnot_error: f64,
}

/// One calibration snapshot: per-qubit records and per-coupler CNOT errors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceCalibration {
    pub device: String,
    #[serde(default)]
    pub date: Option<String>,
    #[serde(rename = "qubit")]
    pub qubits: Vec<QubitCalibration>,
    #[serde(rename = "pair", default)]
    pub pairs: Vec<PairCalibration>,
}

impl DeviceCalibration {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cal: DeviceCalibration = from_toml(text)?;
        cal.validate()?;
        Ok(cal)
    }

    /// One of [`BUILTIN_DEVICES`].
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "ibmqx4" => Self::from_toml_str(IBMQX4),
            "melbourne" => Self::from_toml_str(MELBOURNE),
            other => Err(Error::Config(format!(
                "unknown device `{other}`, expected one of {BUILTIN_DEVICES:?}"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.qubits.is_empty() {
            return Err(Error::Schema {
                path: "qubit".into(),
                message: "qubit list is empty".into(),
            });
        }
        for (i, q) in self.qubits.iter().enumerate() {
            let at = |field: &str| format!("qubit[{i}].{field}");
            if self.qubits[..i].iter().any(|o| o.index == q.index) {
                return Err(Error::Schema {
                    path: at("index"),
                    message: format!("duplicate qubit index {}", q.index),
                });
            }
            for (field, t) in [("t1_us", q.t1_us), ("t2_us", q.t2_us)] {
                if t.is_nan() || t <= 0.0 {
                    return Err(Error::Schema {
                        path: at(field),
                        message: format!("coherence time must be positive, got {t}"),
                    });
                }
            }
            check_probability(at("u1_error"), q.u1_error)?;
            check_probability(at("u2_error"), q.u2_error)?;
            check_probability(at("u3_error"), q.u3_error)?;
            check_probability(at("readout_error"), q.readout_error)?;
        }
        for (i, p) in self.pairs.iter().enumerate() {
            for (field, q) in [("control", p.control), ("target", p.target)] {
                if self.qubit(q).is_none() {
                    return Err(Error::Schema {
                        path: format!("pair[{i}].{field}"),
                        message: format!("qubit {q} is not listed"),
                    });
                }
            }
            check_probability(format!("pair[{i}].cnot_error"), p.cnot_error)?;
        }
        Ok(())
    }

    pub fn qubit(&self, index: usize) -> Option<&QubitCalibration> {
        self.qubits.iter().find(|q| q.index == index)
    }

    /// CNOT error of the coupler between `a` and `b`, either direction.
    /// If both directions are listed the `a → b` entry wins.
    pub fn pair(&self, a: usize, b: usize) -> Option<&PairCalibration> {
        self.pairs
            .iter()
            .find(|p| p.control == a && p.target == b)
            .or_else(|| self.pairs.iter().find(|p| p.control == b && p.target == a))
    }
}

/// Reads a calibration file.
pub fn calibration_from_table(path: &Path) -> Result<DeviceCalibration> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    DeviceCalibration::from_toml_str(&text)
}

/// Depolarizing rate on an unordered pair of logical qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRate {
    pub qubits: (usize, usize),
    pub probability: f64,
}

/// Per-gate depolarizing and symmetric readout flips, indexed by logical
/// qubit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub single_qubit_depolarizing: Vec<f64>,
    pub two_qubit_depolarizing: Vec<PairRate>,
    pub readout_flip: Vec<f64>,
}

impl NoiseModel {
    pub fn noiseless(n_qubits: usize) -> Self {
        NoiseModel {
            single_qubit_depolarizing: vec![0.0; n_qubits],
            two_qubit_depolarizing: Vec::new(),
            readout_flip: vec![0.0; n_qubits],
        }
    }

    /// Same rates on every qubit and every pair.
    pub fn uniform(n_qubits: usize, single: f64, two: f64, readout: f64) -> Result<Self> {
        let mut pairs = Vec::new();
        for a in 0..n_qubits {
            for b in a + 1..n_qubits {
                pairs.push(PairRate {
                    qubits: (a, b),
                    probability: two,
                });
            }
        }
        let m = NoiseModel {
            single_qubit_depolarizing: vec![single; n_qubits],
            two_qubit_depolarizing: pairs,
            readout_flip: vec![readout; n_qubits],
        };
        m.validate()?;
        Ok(m)
    }

    pub fn n_qubits(&self) -> usize {
        self.single_qubit_depolarizing.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits();
        if self.readout_flip.len() != n {
            return Err(Error::QubitCountMismatch {
                expected: n,
                found: self.readout_flip.len(),
            });
        }
        let all = self
            .single_qubit_depolarizing
            .iter()
            .chain(&self.readout_flip)
            .chain(self.two_qubit_depolarizing.iter().map(|p| &p.probability));
        for &p in all {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!("noise probability {p} outside [0, 1]")));
            }
        }
        for p in &self.two_qubit_depolarizing {
            if p.qubits.0 >= n || p.qubits.1 >= n || p.qubits.0 == p.qubits.1 {
                return Err(Error::InvalidArgument(format!("bad pair {:?}", p.qubits)));
            }
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.single_qubit_depolarizing
            .iter()
            .chain(&self.readout_flip)
            .chain(self.two_qubit_depolarizing.iter().map(|p| &p.probability))
            .all(|&p| p == 0.0)
    }

    pub fn two_qubit_rate(&self, a: usize, b: usize) -> f64 {
        self.two_qubit_depolarizing
            .iter()
            .find(|p| p.qubits == (a, b) || p.qubits == (b, a))
            .map_or(0.0, |p| p.probability)
    }

    /// Multiplies every depolarizing rate by `factor`, capped at 1. Readout
    /// flips are unchanged.
    pub fn scaled_gates(&self, factor: f64) -> Self {
        let mut m = self.clone();
        m.single_qubit_depolarizing
            .iter_mut()
            .for_each(|p| *p = (*p * factor).min(1.0));
        m.two_qubit_depolarizing
            .iter_mut()
            .for_each(|p| p.probability = (p.probability * factor).min(1.0));
        m
    }
}

/// Logical qubit `i` runs on device qubit `assignment[i]`. Single-qubit rate
/// is the device `u3_error`, readout flip its `readout_error`, and every
/// logical pair takes the coupler's `cnot_error`. Every pair of assigned
/// qubits must have a coupler, since the Fourier ladders entangle all pairs.
pub fn noise_from_calibration(cal: &DeviceCalibration, assignment: &[usize]) -> Result<NoiseModel> {
    if assignment.is_empty() {
        return Err(Error::Config("qubit assignment is empty".into()));
    }
    let mut single = Vec::new();
    let mut readout = Vec::new();
    for (i, &dq) in assignment.iter().enumerate() {
        if assignment[..i].contains(&dq) {
            return Err(Error::Config(format!("device qubit {dq} assigned twice")));
        }
        let q = cal
            .qubit(dq)
            .ok_or_else(|| Error::Config(format!("device `{}` has no qubit {dq}", cal.device)))?;
        single.push(q.u3_error);
        readout.push(q.readout_error);
    }
    let mut pairs = Vec::new();
    for a in 0..assignment.len() {
        for b in a + 1..assignment.len() {
            let (da, db) = (assignment[a], assignment[b]);
            let p = cal.pair(da, db).ok_or_else(|| {
                Error::Config(format!(
                    "device `{}` has no coupler between qubits {da} and {db}",
                    cal.device
                ))
            })?;
            pairs.push(PairRate {
                qubits: (a, b),
                probability: p.cnot_error,
            });
        }
    }
    let m = NoiseModel {
        single_qubit_depolarizing: single,
        two_qubit_depolarizing: pairs,
        readout_flip: readout,
    };
    m.validate()?;
    Ok(m)
}

fn apply_pauli(state: &mut StateVector, qubit: usize, which: u8) -> Result<()> {
    match which {
        1 => state.apply(&GateOp::x(qubit)),
        2 => state.apply_matrix(qubit, &pauli_y()),
        3 => state.apply_matrix(qubit, &pauli_z()),
        _ => Ok(()),
    }
}

/// Error draw for one gate: `None`, or the Pauli indices (0 = I) to apply.
fn draw_error<R: Rng>(gate: &GateOp, noise: &NoiseModel, rng: &mut R) -> Option<[u8; 2]> {
    let q = gate.qubits();
    let p = if q.len() == 2 {
        noise.two_qubit_rate(q[0], q[1])
    } else {
        noise.single_qubit_depolarizing[q[0]]
    };
    if p == 0.0 || rng.gen::<f64>() >= p {
        return None;
    }
    if q.len() == 2 {
        let k: u8 = rng.gen_range(1..16);
        Some([k / 4, k % 4])
    } else {
        Some([rng.gen_range(1..4), 0])
    }
}

/// Shot-by-shot trajectory sampling. After each gate a uniformly random
/// non-identity Pauli hits the gate's qubits with that gate's depolarizing
/// probability; measured bits are then flipped with the readout probability.
///
/// Trajectory `t` draws from ChaCha8 seeded with `seed` on stream `t`, so the
/// result does not depend on thread scheduling. Without any noise this is
/// exactly [`StateVector::sample_counts`] with the same seed.
pub fn noisy_run(
    circuit: &Circuit,
    initial: &StateVector,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
) -> Result<ShotCounts> {
    let n = circuit.n_qubits();
    if initial.n_qubits() != n || noise.n_qubits() != n {
        return Err(Error::QubitCountMismatch {
            expected: n,
            found: if initial.n_qubits() != n {
                initial.n_qubits()
            } else {
                noise.n_qubits()
            },
        });
    }
    noise.validate()?;
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be ≥ 1".into()));
    }
    let mut ideal = initial.clone();
    ideal.run(circuit)?;
    if noise.is_noiseless() {
        return ideal.sample_counts(shots, seed);
    }
    let ideal_cdf = cumulative(&ideal.probabilities());

    let outcomes: Vec<usize> = (0..shots)
        .into_par_iter()
        .map(|t| -> Result<usize> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let errors: Vec<Option<[u8; 2]>> = circuit
                .gates()
                .iter()
                .map(|g| draw_error(g, noise, &mut rng))
                .collect();
            let mut outcome = if errors.iter().all(Option::is_none) {
                pick(&ideal_cdf, rng.gen())
            } else {
                let mut s = initial.clone();
                for (g, e) in circuit.gates().iter().zip(&errors) {
                    s.apply(g)?;
                    if let Some(paulis) = e {
                        for (q, &which) in g.qubits().iter().zip(paulis) {
                            apply_pauli(&mut s, *q, which)?;
                        }
                    }
                }
                pick(&cumulative(&s.probabilities()), rng.gen())
            };
            for (q, &flip) in noise.readout_flip.iter().enumerate() {
                if flip > 0.0 && rng.gen::<f64>() < flip {
                    outcome ^= 1 << q;
                }
            }
            Ok(outcome)
        })
        .collect::<Result<_>>()?;

    let mut tally = vec![0u64; 1 << n];
    for o in outcomes {
        tally[o] += 1;
    }
    Ok(ShotCounts::from_tally(n, &tally))
}

fn cumulative(p: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    p.iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect()
}

fn pick(cdf: &[f64], u: f64) -> usize {
    let u = u * cdf.last().copied().unwrap_or(1.0);
    cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1)
}

/// `½ Σ |p_i − q_i|`.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
