use thiserror::Error;

/// Errors raised by predicates, enumerators, parsers and experiment drivers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A zero orientation showed up where general position rules it out.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("general position violated: {0}")]
    GeneralPosition(String),

    #[error("cannot achieve general position after {0} attempts")]
    GeneralPositionBudget(usize),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("too many points: {0} (at most 64 are supported)")]
    TooManyPoints(usize),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
