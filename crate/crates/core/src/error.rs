use thiserror::Error;

use crate::Index;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index sets live in different universes ({0} vs {1})")]
    UniverseMismatch(String, String),

    #[error("index {index} lies outside the universe {universe}")]
    OutOfUniverse { index: u64, universe: String },

    #[error("index {0} exceeds the supported capacity")]
    Capacity(u64),

    #[error("empty range for edge e{0}")]
    EmptyRange(Index),

    #[error("duplicate edge index e{0}")]
    DuplicateEdge(Index),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("unknown edge e{0}")]
    UnknownEdge(Index),

    #[error("s^-1 of {0} is neither finite nor cofinite")]
    NotFiniteOrCofinite(String),

    #[error("characterization inapplicable: {0}")]
    Inapplicable(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("tracked set too small: {0}")]
    TrackedSetTooSmall(String),

    #[error("vertex v{0} is not regular")]
    NotRegular(Index),

    #[error("tail not supported for K-theory: {0}")]
    TailNotSupported(String),

    #[error("K-theory did not stabilize: {0}")]
    NotStabilized(String),

    #[error("{path}: {source}")]
    File { path: String, source: Box<Error> },

    #[error("parse error at {line}:{column}: {reason}")]
    Parse { line: usize, column: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
