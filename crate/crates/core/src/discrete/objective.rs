use crate::info::{DecoderSet, DiscreteSource, EncoderSet, InducedJoint};
use crate::{DibError, Result};

/// `F_s(P) = H(X|U_K) + s Σ_k [I(Y_k;U_k) + H(X|U_k)]`, nats.
pub fn f_s(source: &DiscreteSource, encoders: &EncoderSet, s: f64) -> Result<f64> {
    check_s(s)?;
    let joint = InducedJoint::new(source, encoders)?;
    Ok(f_s_from_joint(&joint, s))
}

pub(crate) fn f_s_from_joint(joint: &InducedJoint<'_>, s: f64) -> f64 {
    let per_encoder: f64 = (0..joint.num_encoders())
        .map(|k| joint.i_y_u(k) + joint.h_x_given_u(k))
        .sum();
    joint.h_x_given_uall() + s * per_encoder
}

/// Variational upper bound
/// `F̄_s(P, Q) = s Σ I(Y_k;U_k) - s Σ E[ln q(X|U_k)] - E[ln q(X|U_1..U_K)]`.
///
/// Equals [`f_s`] when `Q` holds the exact posteriors of `P`, and is larger
/// otherwise. Infinite when `q` vanishes where the induced joint has mass.
pub fn f_bar_s(
    source: &DiscreteSource,
    encoders: &EncoderSet,
    decoders: &DecoderSet,
    s: f64,
) -> Result<f64> {
    check_s(s)?;
    decoders.check_compatible(source, encoders)?;
    let joint = InducedJoint::new(source, encoders)?;
    Ok(f_bar_s_from_joint(&joint, decoders, s))
}

pub(crate) fn f_bar_s_from_joint(joint: &InducedJoint<'_>, decoders: &DecoderSet, s: f64) -> f64 {
    let nx = joint.source().x_size();
    let mut value = 0.0;
    for k in 0..joint.num_encoders() {
        let q = &decoders.per_encoder[k];
        let nu = q.n_in();
        let xu = joint.xu(k);
        let mut cross = 0.0;
        for x in 0..nx {
            for u in 0..nu {
                cross += neg_p_ln_q(xu[x * nu + u], q.get(u, x));
            }
        }
        value += s * (joint.i_y_u(k) + cross);
    }
    let q = &decoders.joint;
    for (t, row) in joint.x_uall().chunks(nx).enumerate() {
        for (x, &p) in row.iter().enumerate() {
            value += neg_p_ln_q(p, q.get(t, x));
        }
    }
    value
}

#[inline]
fn neg_p_ln_q(p: f64, q: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else if q <= 0.0 {
        f64::INFINITY
    } else {
        -p * q.ln()
    }
}

pub(crate) fn check_s(s: f64) -> Result<()> {
    if !(s.is_finite() && s >= 0.0) {
        return Err(DibError::InvalidParameter(format!("s = {s} must be finite and nonnegative")));
    }
    Ok(())
}
