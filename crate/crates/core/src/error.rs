use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid projective decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("invalid ranks: {0}")]
    InvalidRanks(String),

    #[error("invalid sign assignment: {0}")]
    InvalidSigns(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid density operator: {0}")]
    InvalidState(String),

    #[error("wrong arity: expected {expected} times, found {found}")]
    Arity { expected: String, found: usize },

    #[error("history table too large: {histories} histories exceeds limit {limit}")]
    TooLarge { histories: usize, limit: usize },

    #[error("inconsistent marginals: {0}")]
    InconsistentMarginals(String),

    #[error("numerator {numerator:.3e} over vanishing denominator at {at:?}")]
    NonzeroOverZero { numerator: f64, at: Vec<usize> },

    #[error("missing input: {0}")]
    MissingInput(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid scenario spec: {0}")]
    InvalidSpec(String),

    #[error("empty grid")]
    EmptyGrid,

    #[error("parameter box must be finite with lo < hi: {0}")]
    UnboundedBox(String),
}
