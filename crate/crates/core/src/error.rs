//! Shared error type.

/// Errors surfaced by the public API.
///
/// `Contract` marks a violated internal invariant (a bug, not a user error);
/// the other variants are refusals the caller can act on.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Malformed input: out-of-range vertices, bad shapes, unparsable JSON.
    #[error("invalid input: {0}")]
    Input(String),

    /// An internal mathematical contract failed (e.g. `d∘d ≠ 0`).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The subtorus has a nontrivial stabilizer on `Z_K`; carries the
    /// vertices of a violating facet.
    #[error("subtorus does not act freely on Z_K: facet {0:?} has a nontrivial stabilizer")]
    NotFree(Vec<usize>),

    /// An operation that needs field coefficients was handed `Z`.
    #[error("field coefficients required: {0}")]
    FieldRequired(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
