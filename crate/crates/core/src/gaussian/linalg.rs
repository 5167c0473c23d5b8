//! Dense Hermitian helpers. Nothing here forms an explicit inverse for
//! conditioning; positive definite systems go through Cholesky.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::Scalar;
use crate::{DibError, Result};

pub type Mat<T> = DMatrix<T>;

/// Relative ridge added on a failed factorization (single retry).
pub const CHOLESKY_JITTER: f64 = 1e-10;
/// Eigenvalue floor of [`pseudo_logdet`].
pub const LOGDET_FLOOR: f64 = 1e-12;

/// `(M + M^H) / 2`.
pub fn hermitian_part<T: Scalar>(m: &Mat<T>) -> Mat<T> {
    (m + m.adjoint()) * T::from_real(0.5)
}

pub fn real_trace<T: Scalar>(m: &Mat<T>) -> f64 {
    m.diagonal().iter().map(|v| v.real()).sum()
}

pub fn max_abs<T: Scalar>(m: &Mat<T>) -> f64 {
    m.iter().map(|v| v.modulus()).fold(0.0, f64::max)
}

pub fn is_hermitian<T: Scalar>(m: &Mat<T>, tol: f64) -> bool {
    m.is_square() && max_abs(&(m - m.adjoint())) <= tol * max_abs(m).max(1.0)
}

/// Cholesky factor, retrying once with `1e-10 · trace/dim` on the diagonal.
pub fn cholesky<T: Scalar>(m: &Mat<T>) -> Result<Cholesky<T, Dyn>> {
    if let Some(c) = m.clone().cholesky() {
        return Ok(c);
    }
    let n = m.nrows();
    let ridge = CHOLESKY_JITTER * real_trace(m) / n.max(1) as f64;
    if ridge > 0.0 && ridge.is_finite() {
        let shifted = m + Mat::<T>::identity(n, n) * T::from_real(ridge);
        if let Some(c) = shifted.cholesky() {
            return Ok(c);
        }
    }
    Err(DibError::NotPositiveDefinite(format!("{n}x{n} matrix failed Cholesky")))
}

/// Strict check without jitter, for validating inputs.
pub fn check_pd<T: Scalar>(m: &Mat<T>, what: &str) -> Result<()> {
    if !is_hermitian(m, 1e-10) {
        return Err(DibError::NotPositiveDefinite(format!("{what} is not Hermitian")));
    }
    if m.clone().cholesky().is_none() {
        return Err(DibError::NotPositiveDefinite(what.to_string()));
    }
    Ok(())
}

/// `A^{-1} B` for positive definite `A`.
pub fn solve_pd<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Result<Mat<T>> {
    Ok(cholesky(a)?.solve(b))
}

pub fn inverse_pd<T: Scalar>(a: &Mat<T>) -> Result<Mat<T>> {
    Ok(hermitian_part(&cholesky(a)?.inverse()))
}

/// `ln det A` through the Cholesky diagonal.
pub fn logdet_pd<T: Scalar>(a: &Mat<T>) -> Result<f64> {
    let c = cholesky(a)?;
    Ok(2.0 * c.l_dirty().diagonal().iter().map(|v| v.real().ln()).sum::<f64>())
}

/// Eigen-decomposition of the Hermitian part: ascending eigenvalues and
/// matching eigenvector columns.
pub fn hermitian_eigen<T: Scalar>(m: &Mat<T>) -> (DVector<f64>, Mat<T>) {
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = eig.eigenvectors.select_columns(&order);
    (values, vectors)
}

pub fn eigenvalues<T: Scalar>(m: &Mat<T>) -> DVector<f64> {
    hermitian_eigen(m).0
}

/// `V f(Λ) V^H` for the Hermitian part of `m`.
pub fn map_eigen<T: Scalar>(m: &Mat<T>, f: impl Fn(f64) -> f64) -> Mat<T> {
    let (values, vectors) = hermitian_eigen(m);
    let scaled = DMatrix::from_fn(vectors.nrows(), vectors.ncols(), |i, j| {
        vectors[(i, j)] * T::from_real(f(values[j]))
    });
    hermitian_part(&(scaled * vectors.adjoint()))
}

/// Principal square root of a PSD matrix (negative round-off clipped).
pub fn psd_sqrt<T: Scalar>(m: &Mat<T>) -> Mat<T> {
    map_eigen(m, |v| v.max(0.0).sqrt())
}

/// `M^{-1/2}` for positive definite `M`.
pub fn pd_inv_sqrt<T: Scalar>(m: &Mat<T>) -> Result<Mat<T>> {
    let values = eigenvalues(m);
    if values.iter().any(|&v| v <= 0.0) {
        return Err(DibError::NotPositiveDefinite("inverse square root".into()));
    }
    Ok(map_eigen(m, |v| v.sqrt().recip()))
}

/// `ln det` with eigenvalues floored at [`LOGDET_FLOOR`]. The flag reports
/// whether the floor was active. Eigenvalues below `-tol·max(1, ‖M‖)` are an error.
pub fn pseudo_logdet<T: Scalar>(m: &Mat<T>) -> Result<(f64, bool)> {
    let values = eigenvalues(m);
    let scale = values.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    if values.iter().any(|&v| v < -1e-8 * scale) {
        return Err(DibError::NotPositiveSemidefinite(format!(
            "smallest eigenvalue {:e}",
            values.min()
        )));
    }
    let floored = values.iter().any(|&v| v < LOGDET_FLOOR);
    Ok((values.iter().map(|&v| v.max(LOGDET_FLOOR).ln()).sum(), floored))
}

/// `ln det` by Cholesky when possible, otherwise [`pseudo_logdet`].
pub fn logdet_psd<T: Scalar>(m: &Mat<T>) -> Result<(f64, bool)> {
    match m.clone().cholesky() {
        Some(c) => {
            let v = 2.0 * c.l_dirty().diagonal().iter().map(|d| d.real().ln()).sum::<f64>();
            if v.is_finite() {
                return Ok((v, false));
            }
            pseudo_logdet(m)
        }
        None => pseudo_logdet(m),
    }
}

/// Block-diagonal assembly.
pub fn block_diag<T: Scalar>(blocks: &[Mat<T>]) -> Mat<T> {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Mat::<T>::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// Vertical concatenation.
pub fn vstack<T: Scalar>(blocks: &[Mat<T>]) -> Mat<T> {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = Mat::<T>::zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        out.view_mut((r, 0), (b.nrows(), cols)).copy_from(b);
        r += b.nrows();
    }
    out
}

/// `Σ_a - Σ_ab Σ_b^{-1} Σ_ab^H`, symmetrized.
pub fn conditional_covariance<T: Scalar>(
    sigma_a: &Mat<T>,
    sigma_ab: &Mat<T>,
    sigma_b: &Mat<T>,
) -> Result<Mat<T>> {
    if sigma_ab.nrows() != sigma_a.nrows() || sigma_ab.ncols() != sigma_b.nrows() || !sigma_b.is_square() {
        return Err(DibError::DimensionMismatch(format!(
            "conditioning {}x{} on {}x{} through {}x{}",
            sigma_a.nrows(),
            sigma_a.ncols(),
            sigma_b.nrows(),
            sigma_b.ncols(),
            sigma_ab.nrows(),
            sigma_ab.ncols()
        )));
    }
    if sigma_b.nrows() == 0 {
        return Ok(hermitian_part(sigma_a));
    }
    let gain = solve_pd(sigma_b, &sigma_ab.adjoint())?;
    Ok(hermitian_part(&(sigma_a - sigma_ab * gain)))
}

/// `c · [ln det Σ_a - ln det Σ_{a|b}]` with `c = 1/2` (real) or `1` (complex).
pub fn gaussian_mi<T: Scalar>(sigma_a: &Mat<T>, sigma_a_given_b: &Mat<T>) -> Result<f64> {
    gaussian_mi_flagged(sigma_a, sigma_a_given_b).map(|(v, _)| v)
}

/// As [`gaussian_mi`], also reporting whether a pseudo-log-det was needed.
pub fn gaussian_mi_flagged<T: Scalar>(sigma_a: &Mat<T>, sigma_a_given_b: &Mat<T>) -> Result<(f64, bool)> {
    if sigma_a.shape() != sigma_a_given_b.shape() || !sigma_a.is_square() {
        return Err(DibError::DimensionMismatch("mutual information operands".into()));
    }
    let (la, fa) = logdet_psd(sigma_a)?;
    let (lc, fc) = logdet_psd(sigma_a_given_b)?;
    Ok(((T::MI_FACTOR * (la - lc)).max(0.0), fa || fc))
}
