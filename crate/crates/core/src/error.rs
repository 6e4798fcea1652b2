use thiserror::Error;

/// Errors raised across the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("rejected state: {0}")]
    RejectedState(String),

    #[error("temperature inversion failed: {0}")]
    InversionFailure(String),

    #[error("solver aborted at t = {t:.6e}, cell {cell}: {reason}")]
    SolverAbort { t: f64, cell: usize, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("mismatched inputs: {0}")]
    Mismatch(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<toml::de::Error> for Error {
    fn from(e: toml::de::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
