use std::path::PathBuf;

use crate::rng::DrawCounter;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("node id {node} out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("self-loop at node {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("invalid graph generator: {0}")]
    InvalidGenerator(String),

    #[error("expected {expected} labels, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error(
        "draw budget of {budget} exceeded after {} primitive draws ({attempts} attempts); \
         parameters are likely supercritical",
        draws.total()
    )]
    BudgetExceeded {
        budget: u64,
        draws: DrawCounter,
        attempts: u64,
    },

    #[error("oracle limit exceeded: {0}")]
    OracleLimit(String),

    #[error("support mismatch: {0}")]
    SupportMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
