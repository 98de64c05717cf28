use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the exact cone machinery.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("coordinates of a hypermetric vector must sum to 1, found {0}")]
    CoordinateSum(i64),
    #[error("unsupported dimension n = {0}")]
    UnsupportedDimension(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("distance vector is not hypermetric")]
    NotHypermetric,
    #[error("distance vector is degenerate")]
    Degenerate,
    #[error("quadratic form is not positive definite")]
    NotPositiveDefinite,
    #[error("sphere is not empty: lattice point {0:?} lies strictly inside")]
    NotEmpty(Vec<i64>),
    #[error("face contains no Schlafli ray")]
    NoSchlafliRay,
    #[error("face contains a Schlafli ray; use the Schlafli certificate")]
    WrongScheme,
    #[error("annulator has not been computed")]
    MissingAnnulator,
    #[error("empty input")]
    EmptyInput,
    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

pub type Result<T> = core::result::Result<T, Error>;
