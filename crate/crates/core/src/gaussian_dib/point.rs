use crate::gaussian::{GaussianJoint, GaussianSource, LinearEncoderSet, Scalar};
use crate::{DibError, Flag, PointDiagnostics, Result, TradeoffPoint};

/// Curve coordinates of linear Gaussian test channels.
///
/// `delta = I(X; U_1..U_K)` and `r_sum = I(X;U_K) + Σ_k [I(Y_k;U_k) - I(X;U_k)]`.
/// `f_s_value` is `F_s - (1+sK) h(X)`. The diagnostics compare `r_sum` with a
/// direct `I(Y_1..Y_K; U_1..U_K)` and `delta` with the Lagrangian identity.
pub fn evaluate_point_gaussian<T: Scalar>(
    source: &GaussianSource<T>,
    encoders: &LinearEncoderSet<T>,
    s: f64,
) -> Result<TradeoffPoint> {
    if !(s.is_finite() && s >= 0.0) {
        return Err(DibError::InvalidParameter(format!("s must be finite and nonnegative, got {s}")));
    }
    let joint = GaussianJoint::new(source, encoders)?;
    let delta = joint.i_x_uall()?;
    let mut r_sum = delta;
    for k in 0..source.num_encoders() {
        r_sum += joint.i_y_u(k)? - joint.i_x_u(k)?;
    }
    let f = -delta + s * (r_sum - delta);
    let delta_lagrangian = (s * r_sum - f) / (1.0 + s);
    let mut diagnostics = PointDiagnostics {
        delta_direct: delta,
        delta_lagrangian,
        lagrangian_gap: (delta_lagrangian - delta).abs(),
        r_sum_direct: joint.i_yall_uall()?,
        flags: Vec::new(),
    };
    if joint.used_pseudo_logdet() {
        diagnostics.flag(Flag::PseudoLogDet);
    }
    Ok(TradeoffPoint {
        s,
        delta,
        r_sum,
        f_s_value: f,
        iterations: 0,
        converged: false,
        restart_index: 0,
        diagnostics,
    })
}
