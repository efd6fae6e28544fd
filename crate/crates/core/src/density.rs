use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermiticity_defect, hermitian_eigen, hermitian_function, CMatrix};
use crate::state::StateVector;

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const EIGEN_FLOOR: f64 = -1e-8;

/// Hermitian, positive semidefinite, unit-trace `2^n × 2^n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    entries: CMatrix,
}

impl DensityMatrix {
    /// Validates all invariants; fails with [`Error::Contract`] otherwise.
    pub fn new(n_qubits: usize, entries: CMatrix) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::InvalidArgument(format!(
                "density matrix for {n_qubits} qubits must be {dim}x{dim}, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let herm = hermiticity_defect(&entries);
        if herm > HERMITIAN_TOL {
            return Err(Error::Contract(format!("not hermitian (defect {herm:e})")));
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::Contract(format!("trace is {trace}, expected 1")));
        }
        let (values, _) = hermitian_eigen(&entries)?;
        if let Some(&min) = values.first() {
            if min < EIGEN_FLOOR {
                return Err(Error::Contract(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(DensityMatrix { n_qubits, entries })
    }

    pub fn from_state(state: &StateVector) -> Self {
        let a = state.amplitudes();
        let dim = a.len();
        let entries = CMatrix::from_fn(dim, dim, |r, c| a[r] * a[c].conj());
        DensityMatrix {
            n_qubits: state.n_qubits(),
            entries,
        }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        DensityMatrix {
            n_qubits,
            entries: CMatrix::identity(dim, dim).scale(1.0 / dim as f64),
        }
    }

    /// Nearest physical state (Frobenius norm) to a Hermitian estimate: the
    /// eigenvalues are projected onto the probability simplex, i.e. shifted
    /// down by a common offset and clipped at zero so they sum to one.
    pub fn project_physical(n_qubits: usize, estimate: &CMatrix) -> Result<Self> {
        let (values, vectors) = hermitian_eigen(estimate)?;
        let clipped = simplex_projection(&values)?;
        let mut scaled = vectors.clone();
        for (c, &w) in clipped.iter().enumerate() {
            let w = Complex64::new(w, 0.0);
            scaled.column_mut(c).iter_mut().for_each(|z| *z *= w);
        }
        let mut entries = scaled * vectors.adjoint();
        // exact hermiticity after round-off
        entries = (&entries + entries.adjoint()).scale(0.5);
        DensityMatrix::new(n_qubits, entries)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eigen(&self.entries)?.0)
    }

    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation_pure(&self, state: &StateVector) -> Result<f64> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.n_qubits,
                found: state.n_qubits(),
            });
        }
        let a = state.amplitudes();
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..a.len() {
            for c in 0..a.len() {
                acc += a[r].conj() * self.entries[(r, c)] * a[c];
            }
        }
        Ok(acc.re)
    }
}

/// Euclidean projection of `values` onto `{x ≥ 0, Σx = 1}`.
fn simplex_projection(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("spectrum is empty or not finite".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut shift = sorted[0] - 1.0;
    for (k, &u) in sorted.iter().enumerate() {
        acc += u;
        let t = (acc - 1.0) / (k + 1) as f64;
        if u - t > 0.0 {
            shift = t;
        }
    }
    Ok(values.iter().map(|v| (v - shift).max(0.0)).collect())
}

pub fn density_from_state(state: &StateVector) -> DensityMatrix {
    DensityMatrix::from_state(state)
}

/// Squared Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`, clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.n_qubits != sigma.n_qubits {
        return Err(Error::QubitCountMismatch {
            expected: rho.n_qubits,
            found: sigma.n_qubits,
        });
    }
    let sqrt_rho = hermitian_function(&rho.entries, |l| Complex64::new(l.max(0.0).sqrt(), 0.0))?;
    let inner = &sqrt_rho * &sigma.entries * &sqrt_rho;
    let (values, _) = hermitian_eigen(&inner)?;
    if let Some(&min) = values.first() {
        if min < EIGEN_FLOOR {
            return Err(Error::Contract(format!(
                "√ρσ√ρ has negative eigenvalue {min:e}; inputs are not PSD"
            )));
        }
    }
    // eigenvalues at round-off level would add ~1e-8 each through the sqrt
    let scale = values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let cutoff = 64.0 * f64::EPSILON * scale;
    let root_trace: f64 = values
        .iter()
        .filter(|&&v| v > cutoff)
        .map(|v| v.sqrt())
        .sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}
