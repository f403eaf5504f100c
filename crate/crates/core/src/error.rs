use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] io::Error),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex id {id} out of range (vertex count {vertex_count})")]
    VertexOutOfRange { id: u64, vertex_count: usize },

    #[error("invalid weight {weight} (weights must lie in [1, 2^31-1])")]
    InvalidWeight { weight: u64 },

    #[error("arc count mismatch: header says {expected}, found {found}")]
    ArcCountMismatch { expected: usize, found: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("missing coordinates for the inertial bisector")]
    MissingCoordinates,

    #[error("graph too small to bisect ({0} vertices)")]
    GraphTooSmall(usize),

    #[error("bisector failure: {0}")]
    Bisector(String),

    #[error("arc id {0} out of range")]
    ArcOutOfRange(usize),

    #[error("input arc {0} has no counterpart in the hierarchy")]
    MissingChArc(usize),

    #[error("metric is in state {found:?}, operation needs {needed}")]
    MetricState { found: crate::customization::MetricState, needed: &'static str },

    #[error("lane mismatch: {0}")]
    LaneMismatch(String),

    #[error("bad binary file: {0}")]
    BadFormat(String),

    #[error("stale file: {0}")]
    Stale(String),

    #[error("internal error: {0}")]
    Internal(String),
}
