use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed TOML; the message carries line and column.
    #[error("config syntax: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("config field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("N = {n}: {source}")]
    AtPoint {
        n: usize,
        #[source]
        source: mtoeplitz::Error,
    },
    #[error("N = {n}: #σ = {size} exceeds the size cap {cap}")]
    SizeCap { n: usize, size: usize, cap: usize },
    #[error(transparent)]
    Library(#[from] mtoeplitz::Error),
    #[error("invalid report: {0}")]
    Report(String),
}

impl CliError {
    pub fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Field {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
