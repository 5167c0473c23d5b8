//! Reference computations that share no update code with the solvers:
//! a single-encoder IB iteration, exhaustive deterministic-encoder search,
//! scalar Gaussian curves from the region bound, and centralized bounds.

mod centralized;
mod curve;
mod grid;
mod ib;
mod scalar_curve;

pub use centralized::{centralized_bounds, centralized_delta_at, CentralizedBounds};
pub use curve::{CurveOracle, CurveSample, Provenance};
pub use grid::{discrete_grid_search, GridSearchResult, GRID_SEARCH_CAP};
pub use ib::{ib_reference_k1, IbReferenceConfig};
pub use scalar_curve::{gaussian_scalar_curve, ScalarCurveConfig, SCALAR_GRID_CAP};
