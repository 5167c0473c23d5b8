use super::{CurveOracle, CurveSample, Provenance};
use crate::gaussian::{GaussianSource, Scalar};
use crate::gaussian_dib::{solve, GaussianSolverConfig};
use crate::{DibError, Result, TradeoffPoint};

/// Bounds for a distributed Gaussian problem from a single encoder that sees
/// every observation.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralizedBounds {
    /// Trade-off of the joint encoder, one sample per multiplier.
    pub curve: CurveOracle,
    /// `I(X; Y_1..Y_K)`.
    pub ceiling: f64,
    pub points: Vec<TradeoffPoint>,
}

/// Runs the Gaussian solver on the stacked observation `[Y_1; ..; Y_K]`
/// (block-diagonal noise) for every `s` in `s_grid`.
pub fn centralized_bounds<T: Scalar>(
    source: &GaussianSource<T>,
    s_grid: &[f64],
    config: &GaussianSolverConfig,
) -> Result<CentralizedBounds> {
    let stacked = source.stacked();
    let cfg = GaussianSolverConfig { description_dims: None, ..config.clone() };
    let points = s_grid
        .iter()
        .map(|&s| solve(&stacked, &GaussianSolverConfig { s, ..cfg.clone() }).map(|sol| sol.point))
        .collect::<Result<Vec<_>>>()?;
    let samples = points.iter().map(|p| CurveSample { r_sum: p.r_sum, delta: p.delta }).collect();
    Ok(CentralizedBounds {
        curve: CurveOracle::new(samples, Provenance::Stacked, config.tol),
        ceiling: source.i_x_yall()?,
        points,
    })
}

const BISECTION_STEPS: usize = 48;

/// Relevance of the joint encoder at sum-rate `r`, located by bisection on
/// `ln s` (the rate decreases in `s`).
pub fn centralized_delta_at<T: Scalar>(source: &GaussianSource<T>, r: f64, config: &GaussianSolverConfig) -> Result<f64> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(DibError::InvalidParameter(format!("rate must be finite and nonnegative, got {r}")));
    }
    let stacked = source.stacked();
    let eval = |s: f64| -> Result<(f64, f64)> {
        let cfg = GaussianSolverConfig { s, description_dims: None, ..config.clone() };
        let p = solve(&stacked, &cfg)?.point;
        Ok((p.r_sum, p.delta))
    };

    let mut hi = 1.0;
    let mut at_hi = eval(hi)?;
    let mut guard = 0;
    while at_hi.0 > r {
        hi *= 4.0;
        at_hi = eval(hi)?;
        guard += 1;
        if guard > 40 {
            return Err(DibError::InvalidParameter("rate never falls to the target".into()));
        }
    }
    let mut lo = hi / 4.0;
    let mut at_lo = eval(lo)?;
    while at_lo.0 < r {
        lo /= 4.0;
        if lo < 1e-12 {
            return source.i_x_yall();
        }
        at_lo = eval(lo)?;
    }
    for _ in 0..BISECTION_STEPS {
        let mid = (lo * hi).sqrt();
        let at_mid = eval(mid)?;
        if at_mid.0 >= r {
            lo = mid;
            at_lo = at_mid;
        } else {
            hi = mid;
            at_hi = at_mid;
        }
    }
    if at_lo.0 == at_hi.0 {
        return Ok(at_lo.1.max(at_hi.1));
    }
    let t = (r - at_hi.0) / (at_lo.0 - at_hi.0);
    Ok(at_hi.1 + t * (at_lo.1 - at_hi.1))
}
