use crate::info::{DiscreteSource, EncoderSet, InducedJoint};
use crate::{DibError, Result, Subset};

/// Right-hand side of the rate-information constraint for one subset `S`:
/// `Σ_{k∈S} [R_k - I(Y_k;U_k|X)] + I(X; U_{S^c})`.
pub fn region_rhs(
    source: &DiscreteSource,
    encoders: &EncoderSet,
    rates: &[f64],
    subset: Subset,
) -> Result<f64> {
    let joint = InducedJoint::new(source, encoders)?;
    check_rates(rates, source.num_encoders(), subset)?;
    Ok(rhs(&joint, rates, subset))
}

/// Largest relevance achievable with `encoders` at per-encoder `rates`: the
/// minimum of [`region_rhs`] over all `2^K` subsets, with the minimizing subset.
pub fn region_min(
    source: &DiscreteSource,
    encoders: &EncoderSet,
    rates: &[f64],
) -> Result<(f64, Subset)> {
    let kk = source.num_encoders();
    let joint = InducedJoint::new(source, encoders)?;
    check_rates(rates, kk, Subset::empty())?;
    let mut best = (f64::INFINITY, Subset::empty());
    for subset in Subset::all(kk) {
        let v = rhs(&joint, rates, subset);
        if v < best.0 {
            best = (v, subset);
        }
    }
    Ok(best)
}

fn rhs(joint: &InducedJoint<'_>, rates: &[f64], subset: Subset) -> f64 {
    let kk = joint.num_encoders();
    let penalty: f64 = subset.indices().map(|k| rates[k] - joint.i_y_u_given_x(k)).sum();
    penalty + joint.i_x_u_subset(subset.complement(kk))
}

fn check_rates(rates: &[f64], kk: usize, subset: Subset) -> Result<()> {
    if rates.len() != kk {
        return Err(DibError::DimensionMismatch(format!("{} rates for {kk} encoders", rates.len())));
    }
    if rates.iter().any(|r| r.is_nan() || *r < 0.0) {
        return Err(DibError::InvalidParameter("rates must be nonnegative".into()));
    }
    if !subset.fits(kk) {
        return Err(DibError::InvalidParameter(format!("subset {subset} is not within 1..{kk}")));
    }
    Ok(())
}
