use std::fmt;

use crate::graph::Graph;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),

    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid rotation system: {0}")]
    InvalidRotation(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("charge identity violated: {0}")]
    IdentityViolation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("vertex {vertex} has a list of size {size}, need at least {needed}")]
    ListTooSmall {
        vertex: usize,
        size: usize,
        needed: usize,
    },

    #[error("inconsistent pins: {0}")]
    InconsistentPins(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("{0}")]
    TheoremViolation(Box<TheoremViolation>),
}

/// A connected residual graph with more vertices than the guarantee threshold
/// in which no island of the requested shape exists.
#[derive(Debug, Clone)]
pub struct TheoremViolation {
    pub k: usize,
    pub size: usize,
    pub threshold: i64,
    /// Original vertex ids of the residual component.
    pub vertices: Vec<usize>,
    /// The residual component, relabelled `0..vertices.len()`.
    pub residual: Graph,
}

impl fmt::Display for TheoremViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "theorem violation: residual component with {} vertices (> threshold {}) has no {}-island of size <= {}",
            self.vertices.len(),
            self.threshold,
            self.k,
            self.size
        )
    }
}
