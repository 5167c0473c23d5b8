//! Finite-alphabet probability containers and information functionals.
//!
//! Conventions: natural logarithms throughout, `0 ln 0 = 0`, and
//! `p ln(p / 0) = +inf` for `p > 0`.

mod joint;
mod pmf;
mod source;

pub use joint::{InducedJoint, MixedRadix, DEFAULT_JOINT_CAP};
pub use pmf::{entropy, kl_divergence, mutual_information, ConditionalPmf, PairPmf, Pmf};
pub use source::{DecoderSet, DiscreteSource, EncoderSet};

pub(crate) use pmf::kl_slice;

/// Total-variation distance `½ Σ |p_i - q_i|` between two rows of equal length.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
