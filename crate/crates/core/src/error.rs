use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("cartan matrix is not of finite type: {0}")]
    NotFiniteType(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("charges must be positive and non-increasing, got {0:?}")]
    NotMonotone(Vec<u32>),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("monomials of different color types cannot be compared")]
    ColorTypeMismatch,

    #[error("energy form is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("minimal-energy check failed: {0}")]
    MinimalEnergy(String),

    #[error("monomial listing exceeds guard of {guard} entries")]
    ListingTooLarge { guard: usize },
}

pub type Result<T> = std::result::Result<T, EngineError>;
