//! Distributed information bottleneck (D-IB).
//!
//! `K` encoders each observe a noisy view `Y_k` of a hidden source `X` and
//! compress it into a description `U_k`. This crate computes the trade-off
//! between the relevance `I(X; U_1..U_K)` the descriptions keep about `X` and
//! the sum-rate they cost, for finite-alphabet sources ([`discrete`]) and for
//! vector Gaussian sources ([`gaussian`], [`gaussian_dib`]).
//!
//! All information quantities are in nats.

pub mod discrete;
pub mod error;
pub mod gaussian;
pub mod gaussian_dib;
pub mod info;
pub mod oracles;
pub mod subset;
pub mod tradeoff;

pub use error::{DibError, Result};
pub use subset::Subset;
pub use tradeoff::{Flag, PointDiagnostics, TradeoffPoint};
