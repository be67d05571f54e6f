use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge {edge} is not {rank}-uniform: {reason}")]
    NonUniformEdge {
        edge: usize,
        rank: usize,
        reason: String,
    },
    #[error("edges {first} and {second} share {shared} vertices")]
    NonLinear {
        first: usize,
        second: usize,
        shared: usize,
    },
    #[error("edge {edge} references unknown vertex {vertex}")]
    DanglingVertexRef { edge: usize, vertex: u64 },
    #[error("vertex {0} listed more than once")]
    DuplicateVertex(u64),
    #[error("rank must be at least 2, got {0}")]
    InvalidRank(usize),
    #[error("no such edge: {0}")]
    NoSuchEdge(usize),
    #[error("no such vertex: {0}")]
    NoSuchVertex(usize),
    #[error("diameter is undefined for a disconnected hypergraph")]
    DiameterUndefined,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("rank {0} is too small for this operation (needs r >= 3)")]
    RankTooSmall(usize),
    #[error("expected an ordinary graph (rank 2), got rank {0}")]
    RankNotTwo(usize),
    #[error("target vertex {vertex} already lies in edge {edge}")]
    TargetInsideEdge { edge: usize, vertex: usize },
    #[error("pivot vertex {vertex} is not in edge {edge}")]
    PivotNotInEdge { edge: usize, vertex: usize },
    #[error("edge {0} appears twice in one move")]
    DuplicateMove(usize),
    #[error("moving edges produced a non-linear hypergraph (edges {first} and {second})")]
    NonLinearResult { first: usize, second: usize },
    #[error("edge {0} is pendent; edge-releasing needs at least two intersection vertices")]
    PendentEdge(usize),
    #[error("hypergraph is not acyclic")]
    NotAcyclic,
    #[error("hypergraph is not connected")]
    Disconnected,
    #[error("hypergraph has no edges")]
    NoEdges,
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("enumeration of {count} edges exceeds the budget of {budget}")]
    BudgetExceeded { count: usize, budget: usize },
    #[error("brute-force enumeration over {0} edges is too large")]
    TooLarge(usize),
    #[error("matching polynomial has no positive root")]
    NoPositiveRoot,
    #[error("power iteration did not converge after {0} iterations")]
    NotConverged(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
