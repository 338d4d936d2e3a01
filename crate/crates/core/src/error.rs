use thiserror::Error;

/// Errors raised by the series, tensor, sequence and norm layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("series must have zero constant term")]
    NonzeroConstant,

    #[error("series must have constant term 1")]
    ConstantNotOne,

    #[error("linear part is not the identity map")]
    NotUnitLinear,

    #[error("degree {degree} exceeds the available maximum {max}")]
    DegreeOverflow { degree: usize, max: usize },

    #[error("invalid multi-index: {0}")]
    InvalidIndex(String),

    #[error("weight matrix is not Hermitian positive definite")]
    NotPositiveDefinite,

    #[error("dense tensor of {size} entries exceeds budget {budget}")]
    BudgetExceeded { size: usize, budget: usize },

    #[error("invalid family spec: {0}")]
    InvalidSpec(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("malformed document: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
