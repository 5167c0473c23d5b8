use serde::{Deserialize, Serialize};

use super::{ConditionalPmf, Pmf};
use crate::{DibError, Result};

/// `p(x) Π_k p(y_k | x)`: the observations are conditionally independent
/// given `X` by construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteSource {
    px: Pmf,
    channels: Vec<ConditionalPmf>,
}

impl DiscreteSource {
    pub fn new(px: Pmf, channels: Vec<ConditionalPmf>) -> Result<Self> {
        if channels.is_empty() {
            return Err(DibError::InvalidParameter("a source needs at least one encoder".into()));
        }
        if channels.len() > crate::Subset::MAX_ENCODERS {
            return Err(DibError::InvalidParameter("too many encoders".into()));
        }
        for (k, ch) in channels.iter().enumerate() {
            if ch.n_in() != px.len() {
                return Err(DibError::DimensionMismatch(format!(
                    "channel {} has {} rows but |X| = {}",
                    k + 1,
                    ch.n_in(),
                    px.len()
                )));
            }
        }
        Ok(DiscreteSource { px, channels })
    }

    pub fn px(&self) -> &Pmf {
        &self.px
    }

    pub fn channel(&self, k: usize) -> &ConditionalPmf {
        &self.channels[k]
    }

    pub fn channels(&self) -> &[ConditionalPmf] {
        &self.channels
    }

    pub fn num_encoders(&self) -> usize {
        self.channels.len()
    }

    pub fn x_size(&self) -> usize {
        self.px.len()
    }

    pub fn y_size(&self, k: usize) -> usize {
        self.channels[k].n_out()
    }

    pub fn y_sizes(&self) -> Vec<usize> {
        self.channels.iter().map(ConditionalPmf::n_out).collect()
    }

    /// `p(y_k)`.
    pub fn py(&self, k: usize) -> Vec<f64> {
        let ch = &self.channels[k];
        let mut py = vec![0.0; ch.n_out()];
        for (row, &p) in ch.rows().zip(self.px.probs()) {
            py.iter_mut().zip(row).for_each(|(acc, q)| *acc += p * q);
        }
        py
    }

    /// `p(x | y_k)` as a `Y_k -> X` conditional. Rows of unobservable `y_k`
    /// fall back to `p(x)`.
    pub fn posterior(&self, k: usize) -> ConditionalPmf {
        let ch = &self.channels[k];
        let (nx, ny) = (self.x_size(), ch.n_out());
        let py = self.py(k);
        let mut data = vec![0.0; ny * nx];
        for y in 0..ny {
            let row = &mut data[y * nx..(y + 1) * nx];
            if py[y] > 0.0 {
                for (x, v) in row.iter_mut().enumerate() {
                    *v = self.px.probs()[x] * ch.get(x, y) / py[y];
                }
            } else {
                row.copy_from_slice(self.px.probs());
            }
        }
        ConditionalPmf::from_flat_normalized(ny, nx, data)
    }
}

/// Test channels `p(u_k | y_k)`, one per encoder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EncoderSet {
    encoders: Vec<ConditionalPmf>,
}

impl EncoderSet {
    pub fn new(encoders: Vec<ConditionalPmf>) -> Result<Self> {
        if encoders.is_empty() {
            return Err(DibError::InvalidParameter("empty encoder set".into()));
        }
        Ok(EncoderSet { encoders })
    }

    /// `p(u_k | y_k) = 1 / |U_k|`.
    pub fn uniform(source: &DiscreteSource, u_sizes: &[usize]) -> Result<Self> {
        check_len(source, u_sizes.len())?;
        Self::new(
            u_sizes
                .iter()
                .enumerate()
                .map(|(k, &nu)| ConditionalPmf::uniform(source.y_size(k), nu))
                .collect(),
        )
    }

    /// `u_k = y_k`.
    pub fn identity(source: &DiscreteSource) -> Self {
        EncoderSet {
            encoders: source.y_sizes().into_iter().map(ConditionalPmf::identity).collect(),
        }
    }

    pub fn encoder(&self, k: usize) -> &ConditionalPmf {
        &self.encoders[k]
    }

    pub fn encoders(&self) -> &[ConditionalPmf] {
        &self.encoders
    }

    pub fn len(&self) -> usize {
        self.encoders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.encoders.is_empty()
    }

    pub fn u_sizes(&self) -> Vec<usize> {
        self.encoders.iter().map(ConditionalPmf::n_out).collect()
    }

    pub(crate) fn replace(&mut self, k: usize, encoder: ConditionalPmf) {
        self.encoders[k] = encoder;
    }

    /// Checks that encoder `k` reads `Y_k`.
    pub fn check_compatible(&self, source: &DiscreteSource) -> Result<()> {
        check_len(source, self.len())?;
        for (k, enc) in self.encoders.iter().enumerate() {
            if enc.n_in() != source.y_size(k) {
                return Err(DibError::DimensionMismatch(format!(
                    "encoder {} reads {} symbols but |Y_{}| = {}",
                    k + 1,
                    enc.n_in(),
                    k + 1,
                    source.y_size(k)
                )));
            }
        }
        Ok(())
    }

    /// Largest per-row total-variation distance between two encoder sets.
    pub fn max_row_distance(&self, other: &EncoderSet) -> f64 {
        self.encoders
            .iter()
            .zip(&other.encoders)
            .flat_map(|(a, b)| a.rows().zip(b.rows()).map(|(r, s)| super::total_variation(r, s)))
            .fold(0.0, f64::max)
    }
}

fn check_len(source: &DiscreteSource, k: usize) -> Result<()> {
    if k != source.num_encoders() {
        return Err(DibError::DimensionMismatch(format!(
            "{k} encoders for a source with {} observations",
            source.num_encoders()
        )));
    }
    Ok(())
}

/// Decoder-side posteriors: `q(x | u_k)` per encoder and `q(x | u_1..u_K)`.
///
/// The joint table is indexed by the flattened description tuple, first
/// encoder most significant (see [`super::MixedRadix`]).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderSet {
    pub per_encoder: Vec<ConditionalPmf>,
    pub joint: ConditionalPmf,
}

impl DecoderSet {
    pub fn new(per_encoder: Vec<ConditionalPmf>, joint: ConditionalPmf) -> Result<Self> {
        let nx = joint.n_out();
        let tuples: usize = per_encoder.iter().map(ConditionalPmf::n_in).product();
        if per_encoder.iter().any(|q| q.n_out() != nx) || tuples != joint.n_in() {
            return Err(DibError::DimensionMismatch("decoder alphabets disagree".into()));
        }
        Ok(DecoderSet { per_encoder, joint })
    }

    pub fn u_sizes(&self) -> Vec<usize> {
        self.per_encoder.iter().map(ConditionalPmf::n_in).collect()
    }

    pub fn check_compatible(&self, source: &DiscreteSource, encoders: &EncoderSet) -> Result<()> {
        if self.u_sizes() != encoders.u_sizes() || self.joint.n_out() != source.x_size() {
            return Err(DibError::DimensionMismatch(
                "decoder alphabets do not match the encoders".into(),
            ));
        }
        Ok(())
    }
}
