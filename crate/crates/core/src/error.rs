use crate::graph::NodeId;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("node not found: {0}")]
    NodeNotFound(NodeId),
    #[error("edge not found: {0}-{1}")]
    EdgeNotFound(NodeId, NodeId),
    #[error("empty graph")]
    EmptyGraph,
    #[error("edgeless graph")]
    NoEdges,
    #[error("self-loop not allowed at node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate edge: {0}-{1}")]
    DuplicateEdge(NodeId, NodeId),
    #[error("edge weight must be positive, got {0}")]
    InvalidWeight(f64),
    #[error("F-node with no seed neighbor: {0}")]
    NoSeedNeighbor(NodeId),
    #[error("no template for resampling")]
    NoTemplate,
    #[error("adjustment produced invalid graph: {0}")]
    InvalidAdjustment(String),
    #[error("power iteration did not converge after {0} iterations")]
    NonConvergence(usize),
    #[error("degenerate degree sequence")]
    DegenerateDegrees,
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
