use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("capability exceeded: {0}")]
    Capability(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid partition {0:?}")]
    InvalidPartition(Vec<usize>),

    #[error("numerical integrity: {0}")]
    NumericalIntegrity(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("decomposition failed: {0}")]
    DecompositionFailure(String),

    #[error("internal consistency: {0}")]
    InternalConsistency(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("not a state: {0}")]
    NotAState(String),

    #[error("formula error: {0}")]
    Formula(String),

    #[error("model error: {0}")]
    Model(String),

    #[error("ill-formed theory: {0}")]
    IllFormedTheory(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
