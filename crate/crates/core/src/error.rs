use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The state space is too large for a dense or exhaustive computation.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// An iterative method failed; the iterates are attached.
    #[error("numeric failure: {message} (after {} iterates)", trace.len())]
    Numeric { message: String, trace: Vec<(f64, f64)> },

    #[error("unreachable target {0} from the generating set")]
    Unreachable(String),

    #[error("cannot parse {0:?}")]
    Parse(String),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub(crate) fn parse(what: impl Into<String>) -> Self {
        Error::Parse(what.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
