use std::path::PathBuf;

use chrono::NaiveDate;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: {message}", path.display())]
    Parse { path: PathBuf, line: u64, message: String },
    #[error("{}:{line}: non-positive price {value} for {ticker}", path.display())]
    NonPositivePrice {
        path: PathBuf,
        line: u64,
        ticker: String,
        value: f64,
    },
    #[error("{}:{line}: duplicate row for {ticker} on {date}", path.display())]
    DuplicateRow {
        path: PathBuf,
        line: u64,
        ticker: String,
        date: NaiveDate,
    },
    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Validation(Vec<String>),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qrisk_core::Error),
    #[error("serializing {what}: {message}")]
    Serialize { what: &'static str, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 for bad input or configuration, 2 for failures
    /// while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Usage(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
