//! Crate-wide error types.

use thiserror::Error;

/// Reasons a compressed or serialized encoding can fail to decode.
///
/// Decoders never repair corrupt input; each failure path is reported
/// separately so wire-level tampering can be diagnosed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("malformed encoding: {0}")]
    Malformed(String),
    #[error("recovered value is not a perfect square")]
    SqrtInexact,
    #[error("expected exact division failed")]
    InexactDivision,
    #[error("cofactor is not invertible in the target ring")]
    NonInvertible,
    #[error("residues are incompatible under the CRT")]
    IncompatibleResidues,
    #[error("decoded form is not reduced")]
    NotReduced,
    #[error("decoded element does not match the discriminant or curve")]
    DiscriminantMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("domain error: {0}")]
    Domain(String),
    /// Untrusted wire data failed to decode.
    #[error("corrupt encoding: {0}")]
    Codec(#[from] CodecError),
    /// Input parse failure (hex, descriptors, integers).
    #[error("parse error: {0}")]
    Parse(String),
    /// Elements of different groups were combined.
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    /// A configured resource bound (memory, enumeration size) was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// An internal invariant failed; indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
