//! Crate-wide error type.

/// Errors from experiment setup, data-structure contracts, and I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("input must be nonempty")]
    EmptyInput,
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("duplicate elements in input")]
    DuplicateElements,
    #[error("hash table is full")]
    TableFull,
    #[error("duplicate key {0}")]
    DuplicateKey(u64),
    #[error("load factor must lie in [0, 1), got {0}")]
    InvalidLoadFactor(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("too many points: {got} exceeds limit {limit}")]
    TooManyPoints { got: usize, limit: usize },
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("order is not a permutation of the point indices")]
    NotAPermutation,
    #[error("records disagree on experiment name or column set")]
    HeterogeneousColumns,
    #[error("vertex count must be even, got {0}")]
    OddVertexCount(usize),
    #[error("not a balanced bisection of the vertex set")]
    InvalidBisection,
    #[error("property violation: {0}")]
    PropertyViolation(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
