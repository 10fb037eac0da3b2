use thiserror::Error;

/// Errors raised by the exact kernels and the higher-level invariant computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("lattice is not a module for {element}: basis element {index} is mapped outside the lattice")]
    NotAModule { element: String, index: usize },
    #[error("units multiplicatively dependent: {0}")]
    DependentUnits(String),
    #[error("rank error: {0}")]
    Rank(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no solution")]
    NoSolution,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(format!("line {} column {}: {}", e.line(), e.column(), e))
    }
}
