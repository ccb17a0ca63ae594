use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed coefficient file {path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error(transparent)]
    Math(#[from] spherepd::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 1 for mathematical failures, 2 for usage errors, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io { .. } => 3,
            Self::Math(spherepd::Error::NegativeCoefficient { .. }) => 1,
            Self::Usage(_) | Self::Format { .. } | Self::Math(_) => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
