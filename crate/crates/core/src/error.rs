use thiserror::Error;

/// Errors raised by the library. Every fallible operation returns one of these;
/// nothing panics on bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A numeric parameter is outside the domain of the operation.
    #[error("{name} = {value} is out of range: {expected}")]
    Range {
        name: &'static str,
        value: i64,
        expected: &'static str,
    },

    #[error("invalid tree: {0}")]
    Tree(String),

    #[error("tree is not stable: {0}")]
    Unstable(String),

    #[error("arity mismatch: expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("invalid torification expression: {0}")]
    Torification(String),

    #[error("selection is not strongly complemented: {0}")]
    NotComplemented(String),

    #[error("invalid permutation: {0}")]
    Permutation(String),

    #[error("incompatible operands: {0}")]
    Incompatible(String),

    #[error("malformed document: {0}")]
    Parse(String),

    /// An internal consistency check failed. Indicates a bug, not bad input.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn range(name: &'static str, value: i64, expected: &'static str) -> Error {
    Error::Range {
        name,
        value,
        expected,
    }
}
