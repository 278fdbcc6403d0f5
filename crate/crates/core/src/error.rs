use thiserror::Error;

/// Errors produced while building instances or running the engines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge ({u}, {v}) has invalid weight {weight}")]
    InvalidWeight { u: usize, v: usize, weight: f64 },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph is disconnected: vertex {0} unreachable")]
    Disconnected(usize),
    #[error("terminal set is empty")]
    NoTerminals,
    #[error("terminal {0} listed twice")]
    DuplicateTerminal(usize),
    #[error("terminal {0} is not part of the terminal set")]
    NotATerminal(usize),
    #[error("input is not a tree: {0}")]
    NotATree(String),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("invalid terminal partition: {0}")]
    InvalidPartition(String),
    #[error("invalid magnitudes: {0}")]
    InvalidMagnitude(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("n = {n} exceeds the all-pairs oracle cap of {cap}; use per-source shortest paths")]
    OracleCapExceeded { n: usize, cap: usize },
    #[error("degenerate metric: {0}")]
    DegenerateMetric(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
