use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} needs {qubits} qubits, above the dense limit of {limit}")]
    TooLarge { what: &'static str, qubits: usize, limit: usize },

    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("Kraus set is not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("routing failed: {0}")]
    Routing(String),

    #[error("no calibration entry for {0}")]
    MissingCalibration(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
