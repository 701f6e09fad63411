use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid algebra: {}", .0.join("; "))]
    InvalidAlgebra(Vec<String>),

    #[error("invalid cochain complex: {0}")]
    InvalidComplex(String),

    #[error("invalid manifold: {0}")]
    InvalidManifold(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Two independent computation paths disagreed. Always a bug.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    /// Process exit code for the CLI contract: 1 for bad input, 2 for oracle disagreement.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Inconsistency(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
