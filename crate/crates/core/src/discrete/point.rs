use super::objective::{check_s, f_s_from_joint};
use crate::info::{DiscreteSource, EncoderSet, InducedJoint};
use crate::{PointDiagnostics, Result, TradeoffPoint};

/// Curve coordinates of a set of encoders at multiplier `s`.
///
/// `r_sum = I(X;U_K) + Σ_k [I(Y_k;U_k) - I(X;U_k)]`, which equals
/// `I(Y_1..Y_K; U_1..U_K)` because the descriptions are conditionally
/// independent given `X`. `delta` comes from the Lagrangian identity
/// `(1+s) Δ = (1+sK) H(X) + s R - F_s`; the direct `I(X; U_1..U_K)` and the
/// gap between the two are kept in the diagnostics.
pub fn evaluate_point(source: &DiscreteSource, encoders: &EncoderSet, s: f64) -> Result<TradeoffPoint> {
    check_s(s)?;
    let joint = InducedJoint::new(source, encoders)?;
    let kk = source.num_encoders() as f64;
    let h_x = joint.h_x();
    let delta_direct = joint.i_x_uall();
    let r_sum = delta_direct
        + (0..source.num_encoders()).map(|k| joint.i_y_u(k) - joint.i_x_u(k)).sum::<f64>();
    let f = f_s_from_joint(&joint, s);
    let delta = ((1.0 + s * kk) * h_x + s * r_sum - f) / (1.0 + s);

    Ok(TradeoffPoint {
        s,
        delta,
        r_sum,
        f_s_value: f,
        iterations: 0,
        converged: false,
        restart_index: 0,
        diagnostics: PointDiagnostics {
            delta_direct,
            delta_lagrangian: delta,
            lagrangian_gap: (delta - delta_direct).abs(),
            r_sum_direct: joint.i_yall_uall(),
            flags: Vec::new(),
        },
    })
}
