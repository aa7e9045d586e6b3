use thiserror::Error;

use crate::report::Report;

/// Errors produced by constructors and operations of this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates the precondition of the requested operation.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A block candidate is not a set of distinct nonzero, sign-exclusive integers.
    #[error("invalid block: {0}")]
    Block(String),

    /// Two collections that should partition the same point set do not.
    #[error("not a partition of a common point set: point {0}")]
    NotPartition(String),

    /// Two blocks that must meet in at most one point meet in more.
    #[error("blocks {first:?} and {second:?} share {common:?}")]
    NotOrthogonal {
        first: Vec<String>,
        second: Vec<String>,
        common: Vec<String>,
    },

    /// An input object failed validation.
    #[error("input failed validation:\n{0}")]
    Invalid(Report),

    /// A construction produced an object that failed its own verification.
    #[error("internal construction fault: {0}")]
    Internal(String),

    /// A document could not be parsed or does not match its declared shape.
    #[error("document: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
