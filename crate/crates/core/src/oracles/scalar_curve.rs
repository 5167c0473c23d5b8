use serde::{Deserialize, Serialize};

use super::{CurveOracle, CurveSample, Provenance};
use crate::gaussian::GaussianSource;
use crate::{DibError, Result};

/// Largest number of grid cells [`gaussian_scalar_curve`] evaluates per rate.
pub const SCALAR_GRID_CAP: u128 = 10_000_000;

const HALF: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScalarCurveConfig {
    /// Spacing of the coarse grid over each `b_k ∈ [0, 1]`.
    pub step: f64,
    /// Golden-section iterations per axis when refining the grid optimum.
    pub refine_iters: usize,
}

impl Default for ScalarCurveConfig {
    fn default() -> Self {
        ScalarCurveConfig { step: 1e-3, refine_iters: 80 }
    }
}

/// Largest relevance at each sum-rate for a real source with scalar
/// observations (`N = 1`, `M_k = 1`, `K ≤ 2`), obtained by maximizing the
/// minimum over subsets of the region bound on a grid of `(b_1, .., b_K)`
/// with the best split of the sum-rate.
pub fn gaussian_scalar_curve(
    source: &GaussianSource<f64>,
    rates: &[f64],
    config: &ScalarCurveConfig,
) -> Result<CurveOracle> {
    let kk = source.num_encoders();
    if source.x_dim() != 1 || source.y_dims().iter().any(|&m| m != 1) || kk > 2 {
        return Err(DibError::InvalidParameter(
            "scalar curve needs N = 1, M_k = 1 and at most two encoders".into(),
        ));
    }
    if rates.iter().any(|r| !r.is_finite() || *r < 0.0) || rates.windows(2).any(|w| w[1] < w[0]) {
        return Err(DibError::InvalidParameter("rates must be finite, nonnegative and ascending".into()));
    }
    if !(config.step > 0.0 && config.step <= 1.0) {
        return Err(DibError::InvalidParameter(format!("grid step {} outside (0, 1]", config.step)));
    }
    let n = (1.0 / config.step).round() as usize;
    let cells = ((n + 1) as u128).pow(kk as u32);
    if cells > SCALAR_GRID_CAP {
        return Err(DibError::SearchTooLarge { size: cells, cap: SCALAR_GRID_CAP });
    }
    let g: Vec<f64> = (0..kk).map(|k| source.normalized_channel(k)[(0, 0)].powi(2)).collect();
    let grid: Vec<f64> = (0..=n).map(|i| (i as f64 / n as f64).min(1.0)).collect();

    let samples = rates
        .iter()
        .map(|&r| {
            let (_, coarse_v) = coarse(&g, &grid, r);
            let (_, fine_v) = refine(&g, r, config.refine_iters);
            CurveSample { r_sum: r, delta: coarse_v.max(fine_v).max(0.0) }
        })
        .collect();
    Ok(CurveOracle::new(samples, Provenance::Grid, config.step))
}

fn value(g: &[f64], b: &[f64], r: f64) -> f64 {
    let l = |v: f64| HALF * (1.0 - v).ln();
    let j = |v: f64, gk: f64| HALF * (1.0 + gk * v).ln();
    match g.len() {
        1 => (r + l(b[0])).min(j(b[0], g[0])),
        _ => {
            let all = HALF * (1.0 + g[0] * b[0] + g[1] * b[1]).ln();
            let first = l(b[0]) + j(b[1], g[1]);
            let second = l(b[1]) + j(b[0], g[0]);
            let full = r + l(b[0]) + l(b[1]);
            // best split r = r1 + r2 of min(r1 + first, r2 + second)
            let r1 = ((r + second - first) / 2.0).clamp(0.0, r);
            let split = (r1 + first).min(r - r1 + second);
            all.min(split).min(full)
        }
    }
}

fn coarse(g: &[f64], grid: &[f64], r: f64) -> (Vec<f64>, f64) {
    let mut best = (vec![0.0; g.len()], f64::NEG_INFINITY);
    if g.len() == 1 {
        for &b in grid {
            let v = value(g, &[b], r);
            if v > best.1 {
                best = (vec![b], v);
            }
        }
    } else {
        for &b0 in grid {
            for &b1 in grid {
                let v = value(g, &[b0, b1], r);
                if v > best.1 {
                    best = (vec![b0, b1], v);
                }
            }
        }
    }
    best
}

/// Maximum of a unimodal function on `[lo, hi]` by golden-section search.
fn golden(f: impl Fn(f64) -> f64, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let candidates = [(a, f(a)), (c, fc), (d, fd), (b, f(b))];
    candidates.into_iter().fold((lo, f64::NEG_INFINITY), |acc, p| if p.1 > acc.1 { p } else { acc })
}

/// The objective is jointly concave in `b`, so its partial maximum over the
/// last coordinate is concave in the first and nested golden sections converge.
fn refine(g: &[f64], r: f64, iters: usize) -> (Vec<f64>, f64) {
    if g.len() == 1 {
        let (b, v) = golden(|b| value(g, &[b], r), 0.0, 1.0, iters);
        return (vec![b], v);
    }
    let inner = |b0: f64| golden(|b1| value(g, &[b0, b1], r), 0.0, 1.0, iters);
    let (b0, v) = golden(|b0| inner(b0).1, 0.0, 1.0, iters);
    (vec![b0, inner(b0).0], v)
}
