use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

/// Every failure the library reports. Decision outcomes ("no solution") are
/// never errors; they are returned as `None` or `false`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NclError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge weight must be at least 1")]
    ZeroWeight,
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("configuration covers {got} edges but the graph has {expected}")]
    DomainMismatch { expected: usize, got: usize },
    #[error("configuration is not legal: vertex {0} is below its minimum inflow")]
    IllegalConfiguration(VertexId),
    #[error("{what} limit of {limit} exceeded")]
    LimitExceeded { what: &'static str, limit: u64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("gadget error: {0}")]
    Gadget(String),
}

pub type Result<T> = std::result::Result<T, NclError>;
