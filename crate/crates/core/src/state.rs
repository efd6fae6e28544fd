use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bit_order::basis_label;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::{GateOp, Matrix2};

/// Above this many qubits the kernels split the amplitude array across threads.
const PARALLEL_MIN_QUBITS: usize = 14;

pub const MAX_QUBITS: usize = 20;

const NORM_TOLERANCE: f64 = 1e-10;

/// Dense pure state of `n_qubits` qubits. Amplitude index bit `q` is qubit `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    /// Takes ownership of a normalized amplitude array of length `2^n`.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude array length {dim} is not a power of two ≥ 2"
            )));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_qubit_count(n_qubits)?;
        let state = StateVector {
            n_qubits,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Contract(format!("state norm² is {norm}, expected 1")));
        }
        Ok(state)
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidArgument("cannot normalize zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(amplitudes)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Applies `gate` in place.
    pub fn apply(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let parallel = self.n_qubits >= PARALLEL_MIN_QUBITS;
        match *gate {
            GateOp::Cnot { control, target } => {
                apply_cnot(&mut self.amplitudes, control, target, parallel)
            }
            GateOp::Cu1 {
                control,
                target,
                lambda,
            } => {
                let mask = (1 << control) | (1 << target);
                apply_phase_where(&mut self.amplitudes, mask, Complex64::from_polar(1.0, lambda), parallel)
            }
            GateOp::U1 { target, lambda } => apply_phase_where(
                &mut self.amplitudes,
                1 << target,
                Complex64::from_polar(1.0, lambda),
                parallel,
            ),
            _ => {
                let m = gate
                    .single_qubit_matrix()
                    .expect("non-controlled gates have a 2x2 matrix");
                apply_single(&mut self.amplitudes, gate.qubits()[0], &m, parallel)
            }
        }
        Ok(())
    }

    /// Applies a 2×2 unitary that is not part of the gate set (used for
    /// Pauli error injection and measurement basis changes).
    pub fn apply_matrix(&mut self, target: usize, m: &Matrix2) -> Result<()> {
        if target >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: target,
                n_qubits: self.n_qubits,
            });
        }
        let parallel = self.n_qubits >= PARALLEL_MIN_QUBITS;
        apply_single(&mut self.amplitudes, target, m, parallel);
        Ok(())
    }

    pub fn run(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.n_qubits,
                found: circuit.n_qubits(),
            });
        }
        circuit.gates().iter().try_for_each(|g| self.apply(g))
    }

    /// Multinomial draw of `shots` computational-basis outcomes.
    pub fn sample_counts(&self, shots: u64, seed: u64) -> Result<ShotCounts> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sample_from_probabilities(&self.probabilities(), self.n_qubits, shots, &mut rng)
    }
}

fn check_qubit_count(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "qubit count {n_qubits} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

pub fn apply_gate(state: &StateVector, gate: &GateOp) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

pub fn run_circuit(initial: &StateVector, circuit: &Circuit) -> Result<StateVector> {
    let mut out = initial.clone();
    out.run(circuit)?;
    Ok(out)
}

pub(crate) fn sample_from_probabilities<R: rand::Rng>(
    probabilities: &[f64],
    n_qubits: usize,
    shots: u64,
    rng: &mut R,
) -> Result<ShotCounts> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be ≥ 1".into()));
    }
    let dist = WeightedIndex::new(probabilities.iter().map(|p| p.max(0.0)))
        .map_err(|e| Error::Numeric(format!("cannot sample distribution: {e}")))?;
    let mut tally = vec![0u64; probabilities.len()];
    for _ in 0..shots {
        tally[dist.sample(rng)] += 1;
    }
    Ok(ShotCounts::from_tally(n_qubits, &tally))
}

fn apply_single(amps: &mut [Complex64], target: usize, m: &Matrix2, parallel: bool) {
    let half = 1usize << target;
    let kernel = |block: &mut [Complex64]| {
        let (lo, hi) = block.split_at_mut(half);
        for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x0, x1) = (*a0, *a1);
            *a0 = m[0][0] * x0 + m[0][1] * x1;
            *a1 = m[1][0] * x0 + m[1][1] * x1;
        }
    };
    if parallel {
        amps.par_chunks_mut(half << 1).for_each(kernel);
    } else {
        amps.chunks_mut(half << 1).for_each(kernel);
    }
}

fn apply_cnot(amps: &mut [Complex64], control: usize, target: usize, parallel: bool) {
    let half = 1usize << target;
    let cmask = 1usize << control;
    let kernel = |(b, block): (usize, &mut [Complex64])| {
        let base = b * (half << 1);
        let (lo, hi) = block.split_at_mut(half);
        for (j, (a0, a1)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
            if (base + j) & cmask != 0 {
                std::mem::swap(a0, a1);
            }
        }
    };
    if parallel {
        amps.par_chunks_mut(half << 1).enumerate().for_each(kernel);
    } else {
        amps.chunks_mut(half << 1).enumerate().for_each(kernel);
    }
}

fn apply_phase_where(amps: &mut [Complex64], mask: usize, phase: Complex64, parallel: bool) {
    let kernel = |(i, a): (usize, &mut Complex64)| {
        if i & mask == mask {
            *a *= phase;
        }
    };
    if parallel {
        amps.par_iter_mut().enumerate().for_each(kernel);
    } else {
        amps.iter_mut().enumerate().for_each(kernel);
    }
}

/// Outcome histogram keyed by `n`-bit strings, q[n-1] leftmost.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotCounts {
    n_qubits: usize,
    counts: BTreeMap<String, u64>,
    total_shots: u64,
}

impl ShotCounts {
    /// `tally[i]` is the count for amplitude index `i`. Zero entries are dropped.
    pub fn from_tally(n_qubits: usize, tally: &[u64]) -> Self {
        let counts: BTreeMap<String, u64> = tally
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (basis_label(i, n_qubits), c))
            .collect();
        let total_shots = tally.iter().sum();
        ShotCounts {
            n_qubits,
            counts,
            total_shots,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn total_shots(&self) -> u64 {
        self.total_shots
    }

    pub fn get(&self, label: &str) -> u64 {
        self.counts.get(label).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Counts indexed by amplitude index.
    pub fn tally(&self) -> Vec<u64> {
        let mut out = vec![0; 1 << self.n_qubits];
        for (label, &c) in &self.counts {
            let idx = usize::from_str_radix(label, 2).expect("labels are binary");
            out[idx] = c;
        }
        out
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let total = self.total_shots as f64;
        self.tally().into_iter().map(|c| c as f64 / total).collect()
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    use proptest::prelude::*;

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hadamard_on_zero() {
        let s = apply_gate(&StateVector::zero(1).unwrap(), &GateOp::h(0)).unwrap();
        assert!((s.amplitudes()[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((s.amplitudes()[1] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn u1_leaves_zero_alone() {
        let s0 = StateVector::zero(1).unwrap();
        let s = apply_gate(&s0, &GateOp::u1(0, 1.3)).unwrap();
        assert_eq!(s, s0);
    }

    #[test]
    fn out_of_range_gate_is_rejected() {
        let mut s = StateVector::zero(2).unwrap();
        assert!(matches!(
            s.apply(&GateOp::h(2)),
            Err(Error::QubitOutOfRange { index: 2, n_qubits: 2 })
        ));
    }

    #[test]
    fn cnot_follows_bit_convention() {
        // control q0 = 1 flips q1: |01⟩ (index 1) → |11⟩ (index 3)
        let s = apply_gate(&StateVector::basis(2, 1).unwrap(), &GateOp::cnot(0, 1)).unwrap();
        assert_eq!(s.probabilities(), vec![0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn cu1_phases_only_11() {
        let amps = vec![c(0.5, 0.0); 4];
        let s = StateVector::from_amplitudes(amps).unwrap();
        let s = apply_gate(&s, &GateOp::cu1(1, 0, PI / 2.0)).unwrap();
        assert!((s.amplitudes()[3] - c(0.0, 0.5)).norm() < 1e-15);
        assert!((s.amplitudes()[1] - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn probabilities_of_basis_state() {
        let s = StateVector::basis(2, 0b01).unwrap();
        assert_eq!(s.probabilities(), vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn sampling_basis_state_is_deterministic() {
        let s = StateVector::basis(2, 0b10).unwrap();
        let counts = s.sample_counts(8192, 7).unwrap();
        assert_eq!(counts.get("10"), 8192);
        assert_eq!(counts.total_shots(), 8192);
    }

    #[test]
    fn sampling_uniform_within_five_sigma() {
        let s = StateVector::from_amplitudes(vec![c(0.5, 0.0); 4]).unwrap();
        let counts = s.sample_counts(8192, 11).unwrap();
        let sigma = (8192.0f64 * 0.25 * 0.75).sqrt();
        for label in ["00", "01", "10", "11"] {
            assert!((counts.get(label) as f64 - 2048.0).abs() < 5.0 * sigma);
        }
        assert_eq!(counts, s.sample_counts(8192, 11).unwrap());
    }

    #[test]
    fn zero_shots_rejected() {
        assert!(StateVector::zero(1).unwrap().sample_counts(0, 1).is_err());
    }

    #[test]
    fn parallel_kernel_matches_sequential() {
        let n = PARALLEL_MIN_QUBITS;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let amps: Vec<Complex64> = (0..1 << n)
            .map(|_| c(rand::Rng::gen::<f64>(&mut rng) - 0.5, rand::Rng::gen::<f64>(&mut rng) - 0.5))
            .collect();
        let mut par = StateVector::normalized(amps).unwrap();
        let mut seq = par.amplitudes().to_vec();
        let gates = [
            GateOp::h(0),
            GateOp::u3(n - 1, 0.4, 0.1, -0.3),
            GateOp::cnot(n - 1, 2),
            GateOp::cnot(1, n - 2),
            GateOp::cu1(3, 5, 0.9),
        ];
        for g in &gates {
            par.apply(g).unwrap();
            match *g {
                GateOp::Cnot { control, target } => apply_cnot(&mut seq, control, target, false),
                GateOp::Cu1 { control, target, lambda } => apply_phase_where(
                    &mut seq,
                    (1 << control) | (1 << target),
                    Complex64::from_polar(1.0, lambda),
                    false,
                ),
                _ => apply_single(&mut seq, g.qubits()[0], &g.single_qubit_matrix().unwrap(), false),
            }
        }
        for (a, b) in par.amplitudes().iter().zip(&seq) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    pub(crate) fn arb_gate(n: usize) -> impl Strategy<Value = GateOp> {
        let angle = -10.0f64..10.0;
        let q = 0..n;
        prop_oneof![
            q.clone().prop_map(GateOp::h),
            q.clone().prop_map(GateOp::x),
            (q.clone(), angle.clone()).prop_map(|(t, a)| GateOp::rz(t, a)),
            (q.clone(), angle.clone()).prop_map(|(t, a)| GateOp::u1(t, a)),
            (q.clone(), angle.clone(), angle.clone(), angle.clone())
                .prop_map(|(t, a, b, c)| GateOp::u3(t, a, b, c)),
            (q.clone(), 1..n).prop_map(move |(cq, off)| GateOp::cnot(cq, (cq + off) % n)),
            (q, 1..n, angle).prop_map(move |(cq, off, a)| GateOp::cu1(cq, (cq + off) % n, a)),
        ]
    }

    proptest! {
        #[test]
        fn norm_preserved_by_random_circuits(
            gates in (2usize..=4).prop_flat_map(|n| (Just(n), prop::collection::vec(arb_gate(n), 0..100)))
        ) {
            let (n, gates) = gates;
            let mut s = StateVector::zero(n).unwrap();
            for g in &gates {
                s.apply(g).unwrap();
            }
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
            let p = s.probabilities();
            prop_assert!(p.iter().all(|&x| x >= 0.0));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }

        #[test]
        fn circuit_then_inverse_is_identity(
            gates in (2usize..=4).prop_flat_map(|n| (Just(n), prop::collection::vec(arb_gate(n), 1..60)))
        ) {
            let (n, gates) = gates;
            let mut circuit = Circuit::new(n, "random");
            for g in gates {
                circuit.push(g).unwrap();
            }
            let mut rng = ChaCha8Rng::seed_from_u64(circuit.len() as u64);
            let amps = (0..1 << n)
                .map(|_| c(rand::Rng::gen::<f64>(&mut rng) - 0.5, rand::Rng::gen::<f64>(&mut rng) - 0.5))
                .collect();
            let psi = StateVector::normalized(amps).unwrap();
            let back = run_circuit(&run_circuit(&psi, &circuit).unwrap(), &circuit.inverse()).unwrap();
            for (a, b) in psi.amplitudes().iter().zip(back.amplitudes()) {
                prop_assert!((a - b).norm() < 1e-9);
            }
        }
    }
}
