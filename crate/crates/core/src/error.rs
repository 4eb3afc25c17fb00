use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: expected two node indices, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: usize },
    #[error("line {line}: node index {index} out of range (n = {n})")]
    OutOfRange { line: usize, index: i64, n: usize },
    #[error("edge list contains no edges")]
    EmptyGraph,
    #[error("graph is disconnected: node {node} unreachable from node 0")]
    Disconnected { node: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("matrix is not symmetric")]
    Asymmetric,
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("matrix does not comply with the graph: nonzero at ({i}, {j}) which is not an edge")]
    NonCompliant { i: usize, j: usize },
    #[error("graph is not regular (degrees range over {min}..={max})")]
    NotRegular { min: usize, max: usize },
    #[error("graph is not a tree ({edges} edges on {n} nodes)")]
    NotTree { n: usize, edges: usize },
    #[error("graph is not a path")]
    NotPath,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix fails the synthesis conditions: {0}")]
    Conditions(String),
    #[error("schedule file: {0}")]
    ScheduleFormat(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
