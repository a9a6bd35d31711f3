use thiserror::Error;

/// Errors raised by the interpolation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("node set needs at least {required} nodes, got {found}")]
    TooFewNodes { required: usize, found: usize },

    #[error("duplicate nodes at indices {first} and {second}")]
    DuplicateNodes { first: usize, second: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("polynomial degree must be even and positive, got {0}")]
    OddDegree(usize),

    #[error("rejection sampler exhausted {attempts} proposals after placing {placed} of {requested} nodes")]
    Infeasible {
        attempts: usize,
        placed: usize,
        requested: usize,
    },

    #[error("damping factor at flat index {index} is not positive ({value})")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("dense matrix of size {size} exceeds the cap of {cap}")]
    DenseCapExceeded { size: usize, cap: usize },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("kernel matrix is singular: {0}")]
    Singular(String),

    #[error("transform plan does not match operand: {0}")]
    PlanMismatch(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("i/o error on {path}: {reason}")]
    Io { path: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
