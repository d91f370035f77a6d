use std::path::PathBuf;

use crate::distfit::PvpFit;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A precondition on an argument or configuration value was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The input is well-formed but carries no usable information
    /// (constant data, a single distinct value, zero variance, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{}: time column is not uniformly spaced ({message})", path.display())]
    NonUniformTime { path: PathBuf, message: String },

    #[error("fit did not converge after {evaluations} evaluations (last iterate: {last:?})")]
    NonConvergence { evaluations: usize, last: PvpFit },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }
}
