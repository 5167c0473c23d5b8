use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Grid,
    ClosedForm,
    Stacked,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub r_sum: f64,
    pub delta: f64,
}

/// Reference `(R_sum, Δ)` samples, ordered by rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveOracle {
    pub samples: Vec<CurveSample>,
    pub provenance: Provenance,
    /// Grid step or solver tolerance behind the samples.
    pub resolution: f64,
}

impl CurveOracle {
    /// Samples sorted by `(r_sum, delta)`.
    pub fn new(mut samples: Vec<CurveSample>, provenance: Provenance, resolution: f64) -> Self {
        samples.sort_by(|a, b| a.r_sum.total_cmp(&b.r_sum).then(a.delta.total_cmp(&b.delta)));
        CurveOracle { samples, provenance, resolution }
    }

    /// Whether both coordinates are non-decreasing along the list, up to `slack`.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.samples
            .windows(2)
            .all(|w| w[1].r_sum >= w[0].r_sum - slack && w[1].delta >= w[0].delta - slack)
    }

    /// Piecewise-linear interpolation in rate, clamped at both ends.
    pub fn interpolate(&self, r: f64) -> Option<f64> {
        let first = self.samples.first()?;
        let last = self.samples.last()?;
        if r <= first.r_sum {
            return Some(first.delta);
        }
        if r >= last.r_sum {
            return Some(last.delta);
        }
        let i = self.samples.partition_point(|p| p.r_sum <= r);
        let (a, b) = (self.samples[i - 1], self.samples[i]);
        if b.r_sum == a.r_sum {
            return Some(a.delta.max(b.delta));
        }
        let t = (r - a.r_sum) / (b.r_sum - a.r_sum);
        Some(a.delta + t * (b.delta - a.delta))
    }
}
