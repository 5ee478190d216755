use thiserror::Error;

/// Errors raised by the exact-arithmetic kernel and the analysis engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An operation was applied outside its mathematical domain
    /// (division by zero, square root of a negative number, mixed radicands).
    #[error("domain error: {0}")]
    Domain(String),

    /// A sheaf expression the cohomology engine cannot evaluate.
    #[error("unsupported expression at `{node}`: {reason}")]
    Unsupported { node: String, reason: String },

    /// Two independent computations of the same quantity disagree.
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// Malformed user input (bundle specs, expression text, flags).
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn unsupported(node: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Unsupported {
            node: node.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
