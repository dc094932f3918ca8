use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("Hahn series quotient has support beyond exponent {cutoff}")]
    HahnCutoff { cutoff: String },

    #[error("scalar backends differ: {left} vs {right}")]
    BackendMismatch { left: String, right: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0} is not a prime")]
    InvalidPrime(u64),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    #[error("query of degree {requested} exceeds the declared cap {cap}")]
    DegreeCapExceeded { requested: u32, cap: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
