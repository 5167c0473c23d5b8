use super::linalg::{eigenvalues, hermitian_part, inverse_pd, max_abs, pd_inv_sqrt, psd_sqrt, solve_pd, Mat};
use super::{BMatrixSet, GaussianJoint, GaussianSource, LinearEncoderSet, Scalar};
use crate::{DibError, Result, Subset};

/// `mmse(Y_k | X, U_k) = Σ_n - Σ_n A^H (A Σ_n A^H + Σ_z)^{-1} A Σ_n`.
pub fn mmse_y_given_xu<T: Scalar>(
    source: &GaussianSource<T>,
    encoders: &LinearEncoderSet<T>,
    k: usize,
) -> Result<Mat<T>> {
    encoders.check_compatible(source)?;
    let n = source.sigma_n(k);
    let a = encoders.a(k);
    let u_given_x = a * n * a.adjoint() + encoders.sigma_z(k);
    let an = a * n;
    Ok(hermitian_part(&(n - an.adjoint() * solve_pd(&u_given_x, &an)?)))
}

/// `B̄_k = A_k^H Σ_{u_k|x}^{-1} A_k`, so that `mmse(Y_k|X,U_k) = Σ_n - Σ_n B̄_k Σ_n`.
pub fn b_bar<T: Scalar>(source: &GaussianSource<T>, encoders: &LinearEncoderSet<T>, k: usize) -> Result<Mat<T>> {
    encoders.check_compatible(source)?;
    let a = encoders.a(k);
    let u_given_x = a * source.sigma_n(k) * a.adjoint() + encoders.sigma_z(k);
    Ok(hermitian_part(&(a.adjoint() * solve_pd(&u_given_x, a)?)))
}

/// `B_k = I - Σ_n^{-1/2} mmse(Y_k|X,U_k) Σ_n^{-1/2}`, equivalently `Σ_n^{1/2} B̄_k Σ_n^{1/2}`.
pub fn b_from_encoders<T: Scalar>(
    source: &GaussianSource<T>,
    encoders: &LinearEncoderSet<T>,
) -> Result<BMatrixSet<T>> {
    let b = (0..source.num_encoders())
        .map(|k| {
            let w = pd_inv_sqrt(source.sigma_n(k))?;
            let mmse = mmse_y_given_xu(source, encoders, k)?;
            let m = source.y_dim(k);
            Ok(hermitian_part(&(Mat::identity(m, m) - &w * mmse * &w)))
        })
        .collect::<Result<Vec<_>>>()?;
    BMatrixSet::new(b)
}

/// Test channels realizing `B`: `Σ_{z_k} = I` and
/// `A_k = (B_k (I - B_k)^{-1})^{1/2} Σ_{n_k}^{-1/2}`.
///
/// Needs every eigenvalue of `B_k` strictly below one.
pub fn encoders_from_b<T: Scalar>(source: &GaussianSource<T>, b: &BMatrixSet<T>) -> Result<LinearEncoderSet<T>> {
    b.check_compatible(source)?;
    let mut a = Vec::with_capacity(b.len());
    let mut z = Vec::with_capacity(b.len());
    for k in 0..b.len() {
        let bk = b.b(k);
        if eigenvalues(bk).iter().any(|&v| v >= 1.0) {
            return Err(DibError::InvalidParameter(format!(
                "B_{} has a unit eigenvalue; no finite test channel realizes it",
                k + 1
            )));
        }
        let m = bk.nrows();
        let ratio = hermitian_part(&(bk * inverse_pd(&(Mat::identity(m, m) - bk))?));
        a.push(psd_sqrt(&ratio) * pd_inv_sqrt(source.sigma_n(k))?);
        z.push(Mat::identity(m, m));
    }
    LinearEncoderSet::new(a, z)
}

/// Largest entry of `Σ_{x|u_{S^c}}^{-1} - Σ_x^{-1} - Σ_{k∈S^c} H_k^H B̄_k H_k`.
///
/// The conditional Fisher information of Gaussian descriptions equals the
/// inverse conditional covariance, so this is zero up to round-off.
pub fn fisher_identity_residual<T: Scalar>(
    source: &GaussianSource<T>,
    encoders: &LinearEncoderSet<T>,
    subset: Subset,
) -> Result<f64> {
    let kk = source.num_encoders();
    if !subset.fits(kk) {
        return Err(DibError::InvalidParameter(format!("subset {subset} exceeds {kk} encoders")));
    }
    let joint = GaussianJoint::new(source, encoders)?;
    let keep = subset.complement(kk);
    let fisher = inverse_pd(&joint.sigma_x_given_u_subset(keep)?)?;
    let mut expected = inverse_pd(source.sigma_x())?;
    for k in keep.indices() {
        let h = source.h(k);
        expected += h.adjoint() * b_bar(source, encoders, k)? * h;
    }
    Ok(max_abs(&(fisher - expected)))
}
