//! Alternating updates of linear Gaussian test channels `(A_k, Σ_{z_k})`
//! along the sum-rate trade-off of a vector Gaussian source.

mod objective;
mod point;
mod solver;
mod updates;

pub use objective::{gaussian_f_bar_s, gaussian_f_s, GaussianDecoders};
pub use point::evaluate_point_gaussian;
pub use solver::{solve, solve_with_observer, GaussianRunTrace, GaussianSolution, GaussianSolverConfig, UpdateOrder};
pub use updates::{update_encoders, update_noise_covariance, update_projection, PD_FLOOR};
