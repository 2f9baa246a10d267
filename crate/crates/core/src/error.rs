//! Error type shared across the library.

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Unified error type.
///
/// The variants mirror the three failure classes surfaced by the CLI:
/// malformed input ([`Error::Parse`]), structurally valid input outside an
/// operation's domain ([`Error::Domain`]), and iteration budgets running out
/// before the requested tolerance is met ([`Error::Convergence`]).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Input text could not be parsed (bad grammar, zero denominator, overflow).
    #[error("parse error: {0}")]
    Parse(String),

    /// Input is well-formed but outside the operation's domain
    /// (for example θ = 0 for the kneading route, or a matrix too large
    /// for the exact characteristic-polynomial path).
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative solver exhausted its budget. The best bracket found for
    /// the quantity being computed is reported.
    #[error("convergence failure after {iterations} iterations: bracket [{lo}, {hi}]")]
    Convergence { lo: f64, hi: f64, iterations: u64 },

    /// A computation would exceed the documented desk-scale limits
    /// (orbit length, enumeration size, recursion depth).
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }
}
