//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by sequence primitives, ball computations, code
/// families, decoding and verification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("inputs must be distinct sequences")]
    IdenticalInputs,

    #[error("index {index} out of range [1, {len}]")]
    IndexOutOfRange { index: usize, len: usize },

    /// Deletion and substitution requested at the same index.
    #[error("deletion and substitution both at index {index}")]
    DegenerateOp { index: usize },

    #[error("parameter {name} = {value} outside [{min}, {max}]")]
    ParamOutOfRange {
        name: &'static str,
        value: u64,
        min: u64,
        max: u64,
    },

    #[error("length {n} exceeds the exhaustive cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("quadruple is not confusable: x(d_x,e_x) != y(d_y,e_y)")]
    NotConfusable,

    #[error("deletion indices must differ (d_x = d_y = {index})")]
    DegenerateOrder { index: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("ball has {ball} elements, {requested} distinct reads requested")]
    BallTooSmall { ball: usize, requested: usize },

    #[error("no codeword is consistent with the reads")]
    NoCandidate,

    #[error("{count} codewords are consistent with the reads")]
    Ambiguous { count: usize },

    #[error("invalid sequence literal: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
