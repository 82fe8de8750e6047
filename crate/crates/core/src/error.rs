use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("empty orbit spectrum: the base vector is zero")]
    EmptySpectrum,

    #[error("enumeration exceeded the cardinality cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("integer overflow while converting an exact result to i64")]
    Overflow,

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "coordinate {coordinate} has zero weight and a nonzero value; \
         nilcone semantics require that the space has no nonzero fixed points"
    )]
    FixedDirection { coordinate: usize },

    #[error("matrix is not skew-Hermitian (deviation {deviation:.3e})")]
    NotSkewHermitian { deviation: f64 },

    #[error("invalid Lie subalgebra pair: {0}")]
    InvalidLiePair(String),

    #[error("internal solver failure: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
