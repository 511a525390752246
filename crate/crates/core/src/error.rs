use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// A size or resource guard was exceeded (e.g. brute force on too many nodes).
    #[error("guard violation: {0}")]
    Guard(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable kind used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NodeOutOfRange { .. } => "node_out_of_range",
            Error::SizeMismatch { .. } => "size_mismatch",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::Guard(_) => "guard_violation",
            Error::Parse { .. } => "parse_error",
            Error::Config(_) => "config_error",
            Error::Io { .. } => "io_error",
        }
    }

    /// Process exit status: 3 for I/O, 4 for guards, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 3,
            Error::Guard(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
