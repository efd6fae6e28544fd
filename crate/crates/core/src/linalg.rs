//! Small dense helpers over `nalgebra` complex matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// `max |a_ij - b_ij|`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn unitarity_defect(m: &CMatrix) -> f64 {
    max_abs_diff(&(m * m.adjoint()), &identity(m.nrows()))
}

/// Eigendecomposition of a Hermitian matrix. Eigenvalues ascending, columns
/// of the returned matrix are the matching orthonormal eigenvectors.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !m.is_square() {
        return Err(Error::InvalidArgument("eigendecomposition needs a square matrix".into()));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numeric("matrix has non-finite entries".into()));
    }
    // Symmetrize so round-off in the input cannot leak an anti-hermitian part.
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numeric("hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// `V · diag(f(λ)) · V†` for Hermitian `m = V diag(λ) V†`.
pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> Complex64) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigen(m)?;
    let mut scaled = vectors.clone();
    for (c, &lambda) in values.iter().enumerate() {
        let w = f(lambda);
        scaled.column_mut(c).iter_mut().for_each(|z| *z *= w);
    }
    Ok(scaled * vectors.adjoint())
}

pub fn diag(entries: &[Complex64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(entries))
}

/// Spectral norm of a Hermitian matrix.
pub fn hermitian_norm(m: &CMatrix) -> Result<f64> {
    let (values, _) = hermitian_eigen(m)?;
    Ok(values.iter().fold(0.0, |acc: f64, v| acc.max(v.abs())))
}
