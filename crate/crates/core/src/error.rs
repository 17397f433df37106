use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SandpileError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("vertex index {index} out of range 1..={count}")]
    VertexOutOfRange { index: usize, count: usize },
    #[error("configuration has {found} heights, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("configuration is not stable")]
    NotStable,
    #[error("{n} non-sink vertices exceeds the subset-scan cap of {cap}")]
    TooManyVertices { n: usize, cap: usize },
    #[error("invalid bipartite configuration: {0}")]
    InvalidBipartite(String),
    #[error("configuration parts are not weakly increasing")]
    NotSorted,
    #[error("configuration violates the compact range assumption")]
    CompactRange,
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("anchor ({0}, {1}) is not a stable intersection")]
    NotStableIntersection(i64, i64),
    #[error("{what} = {value} exceeds the configured bound {cap}")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, SandpileError>;
