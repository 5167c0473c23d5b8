use serde::{Deserialize, Serialize};

use crate::{DibError, Result};

/// Relative drift from unit mass that construction silently normalizes away.
pub const NORMALIZE_DRIFT: f64 = 1e-6;

/// A probability mass function over `{0, .., n-1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    /// Validates and renormalizes `probs`. Entries must be finite and
    /// nonnegative and the total mass within [`NORMALIZE_DRIFT`] of one.
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        normalize_checked(&mut probs)?;
        Ok(Pmf { probs })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "empty alphabet");
        Pmf { probs: vec![1.0 / n as f64; n] }
    }

    /// All mass on `index`.
    pub fn point(n: usize, index: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[index] = 1.0;
        Pmf { probs }
    }

    /// Caller guarantees the entries are nonnegative and already sum to one.
    pub(crate) fn from_normalized(probs: Vec<f64>) -> Self {
        debug_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        Pmf { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }
}

impl TryFrom<Vec<f64>> for Pmf {
    type Error = DibError;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Pmf::new(v)
    }
}

impl From<Pmf> for Vec<f64> {
    fn from(p: Pmf) -> Self {
        p.probs
    }
}

fn normalize_checked(probs: &mut [f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(DibError::InvalidPmf("empty alphabet".into()));
    }
    if let Some(bad) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(DibError::InvalidPmf(format!("entry {bad} is not a probability")));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > NORMALIZE_DRIFT {
        return Err(DibError::InvalidPmf(format!("total mass {total} is not 1")));
    }
    probs.iter_mut().for_each(|p| *p /= total);
    Ok(())
}

/// A row-stochastic matrix: row `i` is the distribution of the output given
/// input symbol `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct ConditionalPmf {
    n_in: usize,
    n_out: usize,
    data: Vec<f64>,
}

impl ConditionalPmf {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_in = rows.len();
        if n_in == 0 {
            return Err(DibError::InvalidPmf("conditional pmf without rows".into()));
        }
        let n_out = rows[0].len();
        let mut data = Vec::with_capacity(n_in * n_out);
        for (i, mut row) in rows.into_iter().enumerate() {
            if row.len() != n_out {
                return Err(DibError::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {n_out}",
                    row.len()
                )));
            }
            normalize_checked(&mut row)
                .map_err(|e| DibError::InvalidPmf(format!("row {i}: {e}")))?;
            data.extend(row);
        }
        Ok(ConditionalPmf { n_in, n_out, data })
    }

    /// Every row uniform over the outputs.
    pub fn uniform(n_in: usize, n_out: usize) -> Self {
        assert!(n_in > 0 && n_out > 0, "empty alphabet");
        ConditionalPmf { n_in, n_out, data: vec![1.0 / n_out as f64; n_in * n_out] }
    }

    /// Output equals input.
    pub fn identity(n: usize) -> Self {
        Self::deterministic(&(0..n).collect::<Vec<_>>(), n)
    }

    /// Row `i` puts all mass on `map[i]`.
    pub fn deterministic(map: &[usize], n_out: usize) -> Self {
        let mut data = vec![0.0; map.len() * n_out];
        for (i, &j) in map.iter().enumerate() {
            assert!(j < n_out, "output symbol {j} out of range");
            data[i * n_out + j] = 1.0;
        }
        ConditionalPmf { n_in: map.len(), n_out, data }
    }

    pub(crate) fn from_flat_normalized(n_in: usize, n_out: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n_in * n_out);
        ConditionalPmf { n_in, n_out, data }
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_out..(i + 1) * self.n_out]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_out + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n_out)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }
}

impl TryFrom<Vec<Vec<f64>>> for ConditionalPmf {
    type Error = DibError;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        ConditionalPmf::new(rows)
    }
}

impl From<ConditionalPmf> for Vec<Vec<f64>> {
    fn from(c: ConditionalPmf) -> Self {
        c.to_rows()
    }
}

/// Joint pmf of a pair `(A, B)`, row-major in `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairPmf {
    n_a: usize,
    n_b: usize,
    pmf: Pmf,
}

impl PairPmf {
    pub fn new(n_a: usize, n_b: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != n_a * n_b {
            return Err(DibError::DimensionMismatch(format!(
                "{} entries for a {n_a}x{n_b} joint",
                probs.len()
            )));
        }
        Ok(PairPmf { n_a, n_b, pmf: Pmf::new(probs)? })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_a = rows.len();
        let n_b = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_b) {
            return Err(DibError::DimensionMismatch("ragged joint table".into()));
        }
        Self::new(n_a, n_b, rows.concat())
    }

    /// `p(a) p(b|a)`.
    pub fn from_marginal_and_channel(pa: &Pmf, channel: &ConditionalPmf) -> Result<Self> {
        if pa.len() != channel.n_in() {
            return Err(DibError::DimensionMismatch(format!(
                "marginal over {} symbols, channel over {}",
                pa.len(),
                channel.n_in()
            )));
        }
        let probs = channel
            .rows()
            .zip(pa.probs())
            .flat_map(|(row, &p)| row.iter().map(move |q| p * q))
            .collect();
        Self::new(pa.len(), channel.n_out(), probs)
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn probs(&self) -> &[f64] {
        self.pmf.probs()
    }

    pub fn marginal_a(&self) -> Pmf {
        Pmf::from_normalized(self.probs().chunks(self.n_b).map(|r| r.iter().sum()).collect())
    }

    pub fn marginal_b(&self) -> Pmf {
        let mut pb = vec![0.0; self.n_b];
        for row in self.probs().chunks(self.n_b) {
            pb.iter_mut().zip(row).for_each(|(acc, p)| *acc += p);
        }
        Pmf::from_normalized(pb)
    }
}

#[inline]
pub(crate) fn xlnx(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

pub(crate) fn entropy_slice(p: &[f64]) -> f64 {
    -p.iter().copied().map(xlnx).sum::<f64>()
}

pub(crate) fn kl_slice(p: &[f64], q: &[f64]) -> f64 {
    let mut d = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return f64::INFINITY;
            }
            d += pi * (pi / qi).ln();
        }
    }
    d.max(0.0)
}

/// Shannon entropy `-Σ p ln p`, nats.
pub fn entropy(p: &Pmf) -> f64 {
    entropy_slice(p.probs()).max(0.0)
}

/// `D(p || q)` in nats; `+inf` when `p` is not absolutely continuous w.r.t. `q`.
pub fn kl_divergence(p: &Pmf, q: &Pmf) -> Result<f64> {
    if p.len() != q.len() {
        return Err(DibError::DimensionMismatch(format!(
            "pmfs over {} and {} symbols",
            p.len(),
            q.len()
        )));
    }
    Ok(kl_slice(p.probs(), q.probs()))
}

/// `I(A; B)` of a joint pmf, nats.
pub fn mutual_information(joint: &PairPmf) -> f64 {
    let pa = joint.marginal_a();
    let pb = joint.marginal_b();
    let mut mi = 0.0;
    for (a, row) in joint.probs().chunks(joint.n_b()).enumerate() {
        for (b, &p) in row.iter().enumerate() {
            if p > 0.0 {
                mi += p * (p / (pa.probs()[a] * pb.probs()[b])).ln();
            }
        }
    }
    mi.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(entropy(&Pmf::new(vec![0.5, 0.5]).unwrap()), LN_2, epsilon = 1e-15);
        assert_eq!(entropy(&Pmf::new(vec![1.0, 0.0]).unwrap()), 0.0);
        // -(0.25 ln 0.25 + 0.75 ln 0.75), summed at 50 digits
        assert_abs_diff_eq!(
            entropy(&Pmf::new(vec![0.25, 0.75]).unwrap()),
            0.562_335_144_618_808_4,
            epsilon = 1e-15
        );
    }

    #[test]
    fn kl_examples() {
        let p = Pmf::new(vec![0.3, 0.7]).unwrap();
        assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        let point = Pmf::point(2, 0);
        let half = Pmf::uniform(2);
        assert_abs_diff_eq!(kl_divergence(&point, &half).unwrap(), LN_2, epsilon = 1e-15);
        assert_eq!(kl_divergence(&half, &point).unwrap(), f64::INFINITY);
        assert!(kl_divergence(&half, &Pmf::uniform(3)).is_err());
    }

    #[test]
    fn mutual_information_examples() {
        let pa = Pmf::new(vec![0.2, 0.8]).unwrap();
        let product = PairPmf::from_marginal_and_channel(
            &pa,
            &ConditionalPmf::new(vec![vec![0.4, 0.6], vec![0.4, 0.6]]).unwrap(),
        )
        .unwrap();
        assert_abs_diff_eq!(mutual_information(&product), 0.0, epsilon = 1e-15);

        let copy = PairPmf::from_rows(vec![vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert_abs_diff_eq!(mutual_information(&copy), LN_2, epsilon = 1e-15);

        // ln 2 - h(0.1) in nats
        let bsc = PairPmf::from_rows(vec![vec![0.45, 0.05], vec![0.05, 0.45]]).unwrap();
        assert_abs_diff_eq!(mutual_information(&bsc), 0.368_064_207_168_497_1, epsilon = 1e-14);
    }

    #[test]
    fn construction_normalizes_small_drift_only() {
        let p = Pmf::new(vec![0.5, 0.5 + 5e-7]).unwrap();
        assert!((p.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(Pmf::new(vec![0.5, 0.51]).is_err());
        assert!(Pmf::new(vec![1.2, -0.2]).is_err());
        assert!(Pmf::new(vec![f64::NAN, 1.0]).is_err());
        assert!(Pmf::new(vec![]).is_err());
        assert!(ConditionalPmf::new(vec![vec![1.0], vec![0.5, 0.5]]).is_err());
    }
}
