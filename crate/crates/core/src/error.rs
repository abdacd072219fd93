use thiserror::Error;

/// Errors raised by image, multivalued-function and document operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed argument: dimension mismatch, empty set where one is
    /// required, a map that is not total, and so on.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A point was looked up in an image that does not contain it.
    #[error("point {0} is not in the image")]
    NotInDomain(String),

    /// No path in the image joins the point to the target set.
    #[error("point {0} cannot reach the target set")]
    Unreachable(String),

    /// A constructor's mathematical hypothesis does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An exhaustive enumeration would exceed its configured cap.
    #[error("resource cap exceeded: {0}")]
    Resource(String),

    /// A document could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
