use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Stream(#[from] std::io::Error),

    #[error("{input} line {line}: {message}")]
    Parse {
        input: &'static str,
        line: usize,
        message: String,
    },

    #[error("edges line {line}: self-loop on node `{node}` is not allowed")]
    SelfLoop { line: usize, node: String },

    #[error("node `{0}` appears in the edge list but has no color")]
    MissingColor(String),

    #[error("node `{node}` is assigned two colors: `{first}` and `{second}`")]
    ConflictingColor {
        node: String,
        first: String,
        second: String,
    },

    #[error("color index {index} out of range for {k} colors")]
    ColorIndex { index: usize, k: usize },

    #[error("node index {index} out of range for {n} nodes")]
    NodeIndex { index: usize, n: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("backend error: {0}")]
    Backend(String),

    #[error("internal consistency error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures reading or writing files and streams.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::Stream(_))
    }
}
