//! Alternating minimization for the discrete distributed IB under a
//! sum-rate constraint.
//!
//! For a multiplier `s ≥ 0` the solver minimizes
//!
//! ```text
//! F_s(P) = H(X | U_1..U_K) + s Σ_k [ I(Y_k; U_k) + H(X | U_k) ]
//! ```
//!
//! over the test channels `P = {p(u_k | y_k)}` by alternating between the
//! decoder posteriors `Q` (closed form, [`update_decoders`]) and the encoders
//! (exponential-family update, [`update_encoders`]) on the variational upper
//! bound [`f_bar_s`]. Each minimizer yields the curve point
//! `Δ = I(X; U_1..U_K)`, `R = I(Y_1..Y_K; U_1..U_K)`.

mod objective;
mod point;
mod region;
mod solver;
mod updates;

pub use objective::{f_bar_s, f_s};
pub use point::evaluate_point;
pub use region::{region_min, region_rhs};
pub use solver::{initial_encoders, solve, solve_traced, DiscreteSolution, RunTrace, SolverConfig};
pub use updates::{update_decoders, update_encoders};
