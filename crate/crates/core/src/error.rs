use thiserror::Error;

use crate::ordinal::OrdinalError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error("sequence is not strictly increasing: {0:?}")]
    NotIncreasing(Vec<u64>),
    #[error("invalid ground set: {0}")]
    InvalidGround(String),
    #[error("invalid barrier spec: {0}")]
    InvalidSpec(String),
    #[error("{value} is not in the base of {spec}")]
    NotInBase { value: u64, spec: String },
    #[error("{seq} is not an element of {spec}")]
    NotAnElement { seq: String, spec: String },
    #[error("cannot take a variant of {seq} at {k}: {reason}")]
    Variant { seq: String, k: u64, reason: String },
    #[error("{0}")]
    SeqShift(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("coloring is undefined on {0}")]
    ColoringUndefined(String),
    #[error("coloring is not {bound}-bounded: color {color} occurs at least {count} times")]
    BoundExceeded { color: u64, bound: usize, count: usize },
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("BUG: {0}")]
    Bug(String),
}

impl Error {
    /// True for internal invariant violations, as opposed to bad input.
    pub fn is_bug(&self) -> bool {
        matches!(self, Error::Bug(_))
    }
}
