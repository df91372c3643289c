//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised while parsing inputs or evaluating invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed textual input (class literal, sequence literal, table record, ...).
    #[error("parse error: {0}")]
    Parse(String),
    /// A precondition on the mathematical input is violated.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request is well formed but outside of what the engine supports.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// The class `l[E_i]` with `l >= 2` has no enumerative invariant (its value would be infinite).
    #[error("non-enumerative class: {0}")]
    NonEnumerative(String),
    /// A provider table does not contain every key demanded by a query.
    #[error("missing provider keys: {}", .0.join("; "))]
    MissingProviderKeys(Vec<String>),
    /// An intermediate integer left the range of `i128`.
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
}

/// Convenience alias.
pub type Result<T> = std::result::Result<T, Error>;
