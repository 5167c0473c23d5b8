//! Jointly Gaussian models `Y_k = H_k X + N_k` with linear test channels
//! `U_k = A_k Y_k + Z_k`.
//!
//! Every routine is generic over [`Scalar`], so the same code serves real
//! symmetric models and circularly-symmetric complex (Hermitian) models.
//! Information terms carry a `1/2` prefactor in the real case and `1` in the
//! complex case.

mod identities;
mod joint;
pub mod linalg;
mod region;
mod scalar;
mod source;

pub use identities::{b_bar, b_from_encoders, encoders_from_b, fisher_identity_residual, mmse_y_given_xu};
pub use joint::{induce_gaussian_joint, GaussianJoint};
pub use linalg::{conditional_covariance, gaussian_mi, gaussian_mi_flagged, Mat};
pub use region::{region_bound, region_bound_argmin, region_bound_term};
pub use scalar::Scalar;
pub use source::{BMatrixSet, GaussianSource, LinearEncoderSet};
