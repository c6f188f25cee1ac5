use thiserror::Error;

use crate::graph::{EdgeId, HalfEdgeId, VertexId};

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop: edge {edge} has both half-edges at vertex {vertex}")]
    SelfLoop { edge: EdgeId, vertex: VertexId },
    #[error("dangling half-edge {0}: not listed in any rotation")]
    DanglingHalfEdge(HalfEdgeId),
    #[error("malformed rotation at vertex {vertex}: {reason}")]
    MalformedRotation { vertex: VertexId, reason: String },
    #[error("graph is disconnected: vertex {0} unreachable from vertex 0")]
    Disconnected(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("dual is ambiguous: graph has frontier faces (drop them explicitly)")]
    AmbiguousDual,
    #[error("dual would contain a self-loop across edge {0} (bridge)")]
    BridgeInDual(EdgeId),
    #[error("interior face {face} has {len} sides, expected a triangle")]
    NotTriangulation { face: usize, len: usize },
    #[error("frontier vertex {0} lies inside the requested ball")]
    FrontierInside(VertexId),
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("unsupported graph format version {0}")]
    Version(u64),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
