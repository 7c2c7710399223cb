use crate::pcube::Rejection;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("unknown class {0}")]
    UnknownClass(usize),
    #[error("empty vertex set")]
    EmptySet,
    #[error("scale exceeded: {what} is {actual}, limit is {limit} (raise with HCTK_SCALE_OVERRIDE)")]
    ScaleExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not a partial cube: {0}")]
    NotPartialCube(Rejection),
    #[error("not hypercellular")]
    NotHypercellular,
    #[error("internal consistency fault: {0}")]
    Internal(String),
}
