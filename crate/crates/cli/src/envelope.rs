use serde::{Deserialize, Serialize};

/// A point of the `(R_sum, Δ)` plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub r_sum: f64,
    pub delta: f64,
}

/// Upper concave envelope of `points` by a monotone-chain scan, ordered by
/// increasing rate.
///
/// Points on a hull edge are kept. Of several points sharing a rate only the
/// highest survives. Non-finite points are ignored.
pub fn upper_envelope(points: &[EnvelopePoint]) -> Vec<EnvelopePoint> {
    let mut pts: Vec<EnvelopePoint> =
        points.iter().copied().filter(|p| p.r_sum.is_finite() && p.delta.is_finite()).collect();
    pts.sort_by(|a, b| a.r_sum.total_cmp(&b.r_sum).then(b.delta.total_cmp(&a.delta)));
    pts.dedup_by(|later, kept| later.r_sum == kept.r_sum);

    let mut hull: Vec<EnvelopePoint> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) > 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Positive when `b` lies strictly below the segment from `a` to `c`.
fn cross(a: EnvelopePoint, b: EnvelopePoint, c: EnvelopePoint) -> f64 {
    (b.r_sum - a.r_sum) * (c.delta - a.delta) - (b.delta - a.delta) * (c.r_sum - a.r_sum)
}

/// Envelope value at rate `r` by linear interpolation; `None` outside the
/// envelope's rate range.
pub fn envelope_at(envelope: &[EnvelopePoint], r: f64) -> Option<f64> {
    let first = envelope.first()?;
    let last = envelope.last()?;
    if r < first.r_sum || r > last.r_sum {
        return None;
    }
    let i = envelope.partition_point(|p| p.r_sum < r);
    if envelope[i].r_sum == r || i == 0 {
        return Some(envelope[i].delta);
    }
    let (a, b) = (envelope[i - 1], envelope[i]);
    let t = (r - a.r_sum) / (b.r_sum - a.r_sum);
    Some(a.delta + t * (b.delta - a.delta))
}
