use thiserror::Error;

/// Errors raised by the solvers and the instance parsers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed number {text:?}: {reason}")]
    MalformedNumber { text: String, reason: &'static str },

    #[error("{what}: malformed number at row {row}, column {col}: {reason}")]
    MalformedEntry {
        what: &'static str,
        row: usize,
        col: usize,
        reason: String,
    },

    #[error("non-positive value at row {row}, column {col}")]
    NonPositiveValue { row: usize, col: usize },

    #[error("{what} is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        what: &'static str,
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("{what} is empty")]
    Empty { what: &'static str },

    #[error("{what} has non-zero diagonal entry at ({index}, {index})")]
    NonZeroDiagonal { what: &'static str, index: usize },

    #[error("not a permutation: {0}")]
    NotPermutation(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("no cycles exist in a graph with {n} node(s)")]
    NoCycles { n: usize },

    #[error("{what}: n = {n} exceeds cap {cap}")]
    AboveCap {
        what: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("invalid range [{lo}, {hi}]: {reason}")]
    InvalidRange {
        lo: i64,
        hi: i64,
        reason: &'static str,
    },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
