use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the siting pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A domain invariant was violated when constructing a value.
    #[error("invalid value for `{field}`: {reason}")]
    Invalid { field: String, reason: String },

    /// Something looked up by key (climate zone, fips, tech) does not exist.
    #[error("unknown {kind} `{key}`")]
    Lookup { kind: &'static str, key: String },

    /// Malformed input at a particular position in a text file.
    #[error("{source_name}:{line}: {column}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: String,
        message: String,
    },

    #[error("duplicate {kind} `{key}`")]
    Duplicate { kind: &'static str, key: String },

    /// The model could not be assembled from the given inputs.
    #[error("model assembly: {0}")]
    Assembly(String),

    #[error("solver: {0}")]
    Solver(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("scenario json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
