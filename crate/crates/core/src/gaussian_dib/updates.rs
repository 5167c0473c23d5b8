use crate::gaussian::linalg::{hermitian_eigen, hermitian_part, inverse_pd, solve_pd, Mat};
use crate::gaussian::{GaussianJoint, GaussianSource, LinearEncoderSet, Scalar};
use crate::{DibError, Result};

use super::UpdateOrder;

/// Eigenvalue floor for the precision in [`update_noise_covariance`].
pub const PD_FLOOR: f64 = 1e-10;

fn check_s(s: f64) -> Result<()> {
    if !(s.is_finite() && s > 0.0) {
        return Err(DibError::InvalidParameter(format!("Gaussian updates need s > 0, got {s}")));
    }
    Ok(())
}

/// `Σ_z' = ((1 + 1/s) Σ_{u_k|x}^{-1} - (1/s) Σ_{u_k|u_{K\k}}^{-1})^{-1}`.
///
/// The bracket is positive definite in exact arithmetic. If round-off
/// pushes an eigenvalue below [`PD_FLOOR`] it is floored and the second
/// component of the result is `true`.
pub fn update_noise_covariance<T: Scalar>(joint: &GaussianJoint<'_, T>, k: usize, s: f64) -> Result<(Mat<T>, bool)> {
    check_s(s)?;
    let precision = inverse_pd(joint.sigma_u_given_x(k))? * T::from_real(1.0 + 1.0 / s)
        - inverse_pd(joint.sigma_u_given_rest(k))? * T::from_real(1.0 / s);
    let (values, vectors) = hermitian_eigen(&precision);
    let floored = values.iter().any(|&v| v < PD_FLOOR);
    let inv = Mat::from_fn(vectors.nrows(), vectors.ncols(), |i, j| {
        vectors[(i, j)] * T::from_real(values[j].max(PD_FLOOR).recip())
    });
    Ok((hermitian_part(&(inv * vectors.adjoint())), floored))
}

/// `A_k' = Σ_z' [ (1 + 1/s) Σ_{u_k|x}^{-1} A_k (I - Σ_{y_k|x} Σ_{y_k}^{-1})
///              - (1/s) Σ_{u_k|u_{K\k}}^{-1} A_k (I - Σ_{y_k|u_{K\k}} Σ_{y_k}^{-1}) ]`.
pub fn update_projection<T: Scalar>(
    joint: &GaussianJoint<'_, T>,
    k: usize,
    s: f64,
    sigma_z_next: &Mat<T>,
) -> Result<Mat<T>> {
    check_s(s)?;
    let a = joint.encoders().a(k);
    if sigma_z_next.nrows() != a.nrows() || !sigma_z_next.is_square() {
        return Err(DibError::DimensionMismatch("next description noise covariance".into()));
    }
    let m = a.ncols();
    let sy = joint.sigma_y(k);
    // (Σ Σ_y^{-1}) = (Σ_y^{-1} Σ)^H for Hermitian Σ
    let residual = |cond: &Mat<T>| -> Result<Mat<T>> {
        Ok(Mat::identity(m, m) - solve_pd(sy, cond)?.adjoint())
    };
    let first = solve_pd(joint.sigma_u_given_x(k), &(a * residual(joint.sigma_y_given_x(k))?))?;
    let second = solve_pd(joint.sigma_u_given_rest(k), &(a * residual(joint.sigma_y_given_rest(k))?))?;
    Ok(sigma_z_next * (first * T::from_real(1.0 + 1.0 / s) - second * T::from_real(1.0 / s)))
}

/// One sweep over all encoders. `Parallel` computes every block from the
/// same statistics; `Sequential` refreshes them after each block.
pub fn update_encoders<T: Scalar>(
    source: &GaussianSource<T>,
    encoders: &LinearEncoderSet<T>,
    s: f64,
    order: UpdateOrder,
) -> Result<(LinearEncoderSet<T>, bool)> {
    check_s(s)?;
    let mut floored = false;
    let mut next = encoders.clone();
    match order {
        UpdateOrder::Parallel => {
            let joint = GaussianJoint::new(source, encoders)?;
            for k in 0..source.num_encoders() {
                let (z, f) = update_noise_covariance(&joint, k, s)?;
                let a = update_projection(&joint, k, s, &z)?;
                floored |= f;
                next.replace(k, a, z);
            }
        }
        UpdateOrder::Sequential => {
            for k in 0..source.num_encoders() {
                let (a, z) = {
                    let joint = GaussianJoint::new(source, &next)?;
                    let (z, f) = update_noise_covariance(&joint, k, s)?;
                    floored |= f;
                    (update_projection(&joint, k, s, &z)?, z)
                };
                next.replace(k, a, z);
            }
        }
    }
    Ok((next, floored))
}
