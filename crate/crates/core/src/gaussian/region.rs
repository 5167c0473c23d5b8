use super::linalg::{eigenvalues, logdet_pd, Mat};
use super::{BMatrixSet, GaussianSource, Scalar};
use crate::{DibError, Result, Subset};

/// One subset's right-hand side:
/// `Σ_{k∈S} [R_k + c ln|I - B_k|] + c ln|Σ_{k∉S} H̄_k^H B_k H̄_k + I|`.
///
/// An infinite rate removes the constraint (`+∞`); a unit eigenvalue of
/// `B_k` for `k ∈ S` with finite rate gives `-∞`.
pub fn region_bound_term<T: Scalar>(
    source: &GaussianSource<T>,
    b: &BMatrixSet<T>,
    rates: &[f64],
    subset: Subset,
) -> Result<f64> {
    check(source, b, rates)?;
    if !subset.fits(source.num_encoders()) {
        return Err(DibError::InvalidParameter(format!("subset {subset} exceeds the encoders")));
    }
    term(source, b, rates, subset)
}

/// Minimum of [`region_bound_term`] over all subsets.
pub fn region_bound<T: Scalar>(source: &GaussianSource<T>, b: &BMatrixSet<T>, rates: &[f64]) -> Result<f64> {
    region_bound_argmin(source, b, rates).map(|(v, _)| v)
}

/// As [`region_bound`], with the minimizing subset.
pub fn region_bound_argmin<T: Scalar>(
    source: &GaussianSource<T>,
    b: &BMatrixSet<T>,
    rates: &[f64],
) -> Result<(f64, Subset)> {
    check(source, b, rates)?;
    let mut best = (f64::INFINITY, Subset::empty());
    for subset in Subset::all(source.num_encoders()) {
        let v = term(source, b, rates, subset)?;
        if v < best.0 {
            best = (v, subset);
        }
    }
    Ok(best)
}

fn term<T: Scalar>(source: &GaussianSource<T>, b: &BMatrixSet<T>, rates: &[f64], subset: Subset) -> Result<f64> {
    let kk = source.num_encoders();
    if subset.indices().any(|k| rates[k] == f64::INFINITY) {
        return Ok(f64::INFINITY);
    }
    let mut acc = 0.0;
    for k in subset.indices() {
        let ld: f64 = eigenvalues(b.b(k)).iter().map(|&v| (1.0 - v.clamp(0.0, 1.0)).ln()).sum();
        acc += rates[k] + T::MI_FACTOR * ld;
    }
    if acc == f64::NEG_INFINITY {
        return Ok(acc);
    }
    let n = source.x_dim();
    let mut fisher = Mat::<T>::identity(n, n);
    for k in subset.complement(kk).indices() {
        let hb = source.normalized_channel(k);
        fisher += hb.adjoint() * b.b(k) * hb;
    }
    Ok(acc + T::MI_FACTOR * logdet_pd(&fisher)?)
}

fn check<T: Scalar>(source: &GaussianSource<T>, b: &BMatrixSet<T>, rates: &[f64]) -> Result<()> {
    b.check_compatible(source)?;
    if rates.len() != source.num_encoders() {
        return Err(DibError::DimensionMismatch(format!(
            "{} rates for {} encoders",
            rates.len(),
            source.num_encoders()
        )));
    }
    if rates.iter().any(|r| r.is_nan() || *r < 0.0) {
        return Err(DibError::InvalidParameter("rates must be nonnegative".into()));
    }
    Ok(())
}
