use thiserror::Error;

/// Errors raised by the numerical kernels, generators and certificate builders.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric (relative asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite: pivot {pivot:.3e} at index {index}")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("matrix is singular to working precision (pivot index {index})")]
    Singular { index: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("eigensolver failed to converge: {0}")]
    EigFailure(String),

    #[error("leading block is not positive real (Rayleigh quotient {value:.3e})")]
    NotPositiveReal { value: f64 },

    #[error("constraint block does not have full row rank (smallest scaled singular value {sigma_min:.3e})")]
    RankDeficientB { sigma_min: f64 },

    #[error("H2 is not symmetric positive definite: {0}")]
    H2NotSpd(String),

    #[error("zero diagonal entry at index {index}")]
    ZeroDiagonal { index: usize },

    #[error("wind is not discretely divergence-free (max cell divergence {divergence:.3e})")]
    WindNotDivergenceFree { divergence: f64 },

    #[error("operator of dimension {dim} exceeds the dense guard {guard}")]
    DimensionGuard { dim: usize, guard: usize },

    #[error("degenerate region: {samples} samples, {required} required")]
    Degenerate { samples: usize, required: usize },

    #[error("region is empty after removing the inner disk")]
    EmptyRegion,

    #[error("eigenvector matrix is near defective (condition {condition:.3e})")]
    NearDefective { condition: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
