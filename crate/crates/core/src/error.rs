use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("slot {slot} out of range for degree bound {d}")]
    SlotOutOfRange { slot: usize, d: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A component (or partition block) grew past the size bound.
    #[error("component of vertex {start} exceeds size cap {cap}")]
    ComponentOverflow { start: Vertex, cap: usize },

    #[error("vertex counts differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("{what}: {n} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("construction error: {0}")]
    Construction(String),

    #[error("diagonal code has length {got}, expected {expected}")]
    CodeLength { expected: usize, got: usize },

    #[error("empty code pool")]
    EmptyPool,

    #[error("family has odd size {0}; a half index set needs an even size")]
    OddFamily(usize),

    #[error("components have unequal sizes ({first} and {other})")]
    UnequalComponents { first: usize, other: usize },

    #[error("separator contract violated: {0}")]
    ContractViolation(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
