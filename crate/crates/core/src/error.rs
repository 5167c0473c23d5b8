use thiserror::Error;

pub type Result<T, E = DibError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DibError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid probability vector: {0}")]
    InvalidPmf(String),

    #[error("joint table of {cells} cells exceeds the cap of {cap}")]
    JointTooLarge { cells: u128, cap: u128 },

    #[error("search space of {size} candidates exceeds the cap of {cap}")]
    SearchTooLarge { size: u128, cap: u128 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("matrix is not positive semidefinite: {0}")]
    NotPositiveSemidefinite(String),

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),
}
