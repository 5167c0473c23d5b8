//! Gaussian objectives measured relative to `(1 + sK) h(X)`, so that only
//! log-determinant differences appear.

use crate::gaussian::linalg::{logdet_psd, real_trace, solve_pd, Mat};
use crate::gaussian::{GaussianJoint, Scalar};
use crate::Result;

/// `F_s - (1+sK) h(X) = -I(X;U_K) + s Σ_k [I(Y_k;U_k) - I(X;U_k)]`.
pub fn gaussian_f_s<T: Scalar>(joint: &GaussianJoint<'_, T>, s: f64) -> Result<f64> {
    let mut per_encoder = 0.0;
    for k in 0..joint.num_encoders() {
        per_encoder += joint.i_y_u(k)? - joint.i_x_u(k)?;
    }
    Ok(-joint.i_x_uall()? + s * per_encoder)
}

/// Linear Gaussian decoders `q(x|u) = N(G u, Σ_q)` for each description and
/// for the full tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianDecoders<T: Scalar = f64> {
    pub gains: Vec<Mat<T>>,
    pub covariances: Vec<Mat<T>>,
    pub joint_gain: Mat<T>,
    pub joint_covariance: Mat<T>,
}

impl<T: Scalar> GaussianDecoders<T> {
    /// Exact posteriors `p(x|u_k)` and `p(x|u_1..u_K)`.
    pub fn from_joint(joint: &GaussianJoint<'_, T>) -> Result<Self> {
        let sx = joint.source().sigma_x();
        let mut gains = Vec::new();
        let mut covariances = Vec::new();
        for k in 0..joint.num_encoders() {
            let cross = joint.sigma_x_uall().columns(joint.block(k).start, joint.block(k).len()).into_owned();
            let (g, c) = posterior(sx, &cross, &joint.sigma_u(k))?;
            gains.push(g);
            covariances.push(c);
        }
        let (joint_gain, joint_covariance) = posterior(sx, joint.sigma_x_uall(), joint.sigma_uall())?;
        Ok(GaussianDecoders { gains, covariances, joint_gain, joint_covariance })
    }
}

fn posterior<T: Scalar>(sx: &Mat<T>, cross: &Mat<T>, su: &Mat<T>) -> Result<(Mat<T>, Mat<T>)> {
    let gain = solve_pd(su, &cross.adjoint())?.adjoint();
    let cov = crate::gaussian::linalg::hermitian_part(&(sx - &gain * cross.adjoint()));
    Ok((gain, cov))
}

/// Variational bound `F̄_s(P, Q) - (1+sK) h(X)`, where `P` is described by
/// `joint` and `Q` by `decoders`. Each cross-entropy contributes
/// `c [ln|Σ_q| - ln|Σ_x| + tr(Σ_q^{-1} M) - N]` with
/// `M = E[(X - G U)(X - G U)^H]`.
pub fn gaussian_f_bar_s<T: Scalar>(joint: &GaussianJoint<'_, T>, decoders: &GaussianDecoders<T>, s: f64) -> Result<f64> {
    let sx = joint.source().sigma_x();
    let n = sx.nrows() as f64;
    let (ld_x, _) = logdet_psd(sx)?;
    let cross_entropy = |gain: &Mat<T>, cov: &Mat<T>, cross: &Mat<T>, su: &Mat<T>| -> Result<f64> {
        let gc = gain * cross.adjoint();
        let m = sx - &gc - gc.adjoint() + gain * su * gain.adjoint();
        let (ld_q, _) = logdet_psd(cov)?;
        Ok(T::MI_FACTOR * (ld_q - ld_x + real_trace(&solve_pd(cov, &m)?) - n))
    };
    let mut value = 0.0;
    for k in 0..joint.num_encoders() {
        let cross = joint.sigma_x_uall().columns(joint.block(k).start, joint.block(k).len()).into_owned();
        let ce = cross_entropy(&decoders.gains[k], &decoders.covariances[k], &cross, &joint.sigma_u(k))?;
        value += s * (joint.i_y_u(k)? + ce);
    }
    value += cross_entropy(&decoders.joint_gain, &decoders.joint_covariance, joint.sigma_x_uall(), joint.sigma_uall())?;
    Ok(value)
}
