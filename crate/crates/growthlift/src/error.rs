use std::path::PathBuf;

/// Errors of the harness, file formats and CLI.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Error from the numerical core.
    #[error(transparent)]
    Core(#[from] growthlift_core::Error),
    /// File could not be read or written.
    #[error("{path}: {source}")]
    Io {
        /// File involved.
        path: PathBuf,
        /// Underlying error.
        source: std::io::Error,
    },
    /// Malformed JSON.
    #[error("{path}: {source}")]
    Json {
        /// File involved.
        path: PathBuf,
        /// Underlying error.
        source: serde_json::Error,
    },
    /// CSV output failure.
    #[error(transparent)]
    Csv(#[from] csv::Error),
    /// Invalid experiment or command-line input.
    #[error("invalid `{field}`: {reason}")]
    Invalid {
        /// Offending field or flag.
        field: &'static str,
        /// Explanation.
        reason: String,
    },
}

/// Crate result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::Invalid {
        field,
        reason: reason.into(),
    }
}
