use crate::info::{kl_slice, ConditionalPmf, DecoderSet, DiscreteSource, EncoderSet, InducedJoint};
use crate::{DibError, Result};

/// Optimal decoders for fixed encoders: the exact posteriors
/// `q(x|u_k) = p(x|u_k)` and `q(x|u_1..u_K) = p(x|u_1..u_K)`.
/// Symbols with zero probability get `p(x)`.
pub fn update_decoders(source: &DiscreteSource, encoders: &EncoderSet) -> Result<DecoderSet> {
    let joint = InducedJoint::new(source, encoders)?;
    Ok(decoders_from_joint(&joint))
}

pub(crate) fn decoders_from_joint(joint: &InducedJoint<'_>) -> DecoderSet {
    DecoderSet {
        per_encoder: (0..joint.num_encoders()).map(|k| joint.posterior_x_given_u(k)).collect(),
        joint: joint.posterior_x_given_uall(),
    }
}

/// One sweep of the encoder update for fixed decoders:
///
/// ```text
/// p'(u_k | y_k) ∝ p(u_k) exp(-ψ_s(u_k, y_k))
/// ψ_s(u_k, y_k) = D(p(x|y_k) || q(x|u_k))
///               + (1/s) E_{U_{K\k} | y_k} D(p(x | U_{K\k}, y_k) || q(x | U_{K\k}, u_k))
/// ```
///
/// Encoders are refreshed in order `k = 1..K`; encoder `k` sees the already
/// updated encoders `j < k` while `p(u_k)` comes from its own current row set.
/// Rows whose weights all vanish are left unchanged.
pub fn update_encoders(
    source: &DiscreteSource,
    encoders: &EncoderSet,
    decoders: &DecoderSet,
    s: f64,
) -> Result<EncoderSet> {
    update_encoders_flagged(source, encoders, decoders, s).map(|(e, _)| e)
}

/// As [`update_encoders`], also reporting whether any row stalled.
pub(crate) fn update_encoders_flagged(
    source: &DiscreteSource,
    encoders: &EncoderSet,
    decoders: &DecoderSet,
    s: f64,
) -> Result<(EncoderSet, bool)> {
    if !(s.is_finite() && s > 0.0) {
        return Err(DibError::InvalidParameter(format!(
            "encoder update needs s > 0, got {s}"
        )));
    }
    decoders.check_compatible(source, encoders)?;

    let mut current = encoders.clone();
    let mut stalled = false;
    for k in 0..source.num_encoders() {
        let (next, st) = {
            let joint = InducedJoint::new(source, &current)?;
            update_one(&joint, decoders, k, s)
        };
        stalled |= st;
        current.replace(k, next);
    }
    Ok((current, stalled))
}

fn update_one(
    joint: &InducedJoint<'_>,
    decoders: &DecoderSet,
    k: usize,
    s: f64,
) -> (ConditionalPmf, bool) {
    let source = joint.source();
    let nx = source.x_size();
    let post_y = source.posterior(k);
    let ny = post_y.n_in();
    let pu = joint.pu(k);
    let nu = pu.len();
    let others = joint.others_given_y(k);
    let n_rest = others.radix.len();
    let q_k = &decoders.per_encoder[k];
    let q_all = &decoders.joint;
    let old = joint.encoders().encoder(k);

    let mut data = vec![0.0; ny * nu];
    let mut stalled = false;
    let mut log_w = vec![0.0; nu];
    for y in 0..ny {
        let pxy = post_y.row(y);
        for u in 0..nu {
            if pu[u] <= 0.0 {
                log_w[u] = f64::NEG_INFINITY;
                continue;
            }
            let mut psi = kl_slice(pxy, q_k.row(u));
            if psi.is_finite() {
                let mut expected = 0.0;
                for r in 0..n_rest {
                    let w = others.p_rest_given_y[y * n_rest + r];
                    if w <= 0.0 {
                        continue;
                    }
                    let post = &others.post_x[(y * n_rest + r) * nx..(y * n_rest + r + 1) * nx];
                    expected += w * kl_slice(post, q_all.row(others.full[r * nu + u]));
                }
                psi += expected / s;
            }
            log_w[u] = pu[u].ln() - psi;
        }
        let row = &mut data[y * nu..(y + 1) * nu];
        let top = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !top.is_finite() {
            row.copy_from_slice(old.row(y));
            stalled = true;
            continue;
        }
        let mut total = 0.0;
        for (v, lw) in row.iter_mut().zip(&log_w) {
            *v = (lw - top).exp();
            total += *v;
        }
        row.iter_mut().for_each(|v| *v /= total);
    }
    (ConditionalPmf::from_flat_normalized(ny, nu, data), stalled)
}
