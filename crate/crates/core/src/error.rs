use thiserror::Error;

/// Errors raised by the library.
///
/// `Usage` maps to exit code 2 in the CLI, everything else to 1.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("search bound {bound} exhausted after {found} of {wanted} represented primes")]
    SearchExhausted {
        bound: u64,
        found: usize,
        wanted: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
