use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range input (bad generator index, parse failure, ...).
    #[error("invalid input: {0}")]
    Input(String),
    /// Two operands live in different group contexts.
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    /// An enumeration or search would exceed its configured bound.
    #[error("resource bound exceeded: {what} (bound {bound})")]
    Resource { what: String, bound: usize },
    /// The operation is not defined for this context or descriptor.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Integer matrix arithmetic left the i64 range.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    /// A projection with trace 0 or 1 where a proper one is required.
    #[error("degenerate projection: {0}")]
    DegenerateProjection(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
