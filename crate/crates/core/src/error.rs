use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("edge {edge} has endpoint {endpoint} but the graph has {vertex_count} vertices")]
    EndpointOutOfRange {
        edge: usize,
        endpoint: usize,
        vertex_count: usize,
    },
    #[error("a graph without vertices cannot carry edges")]
    EmptyVertexSet,
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has {vertex_count} vertices, above the canonicalization limit of {limit}")]
    TooLarge { vertex_count: usize, limit: usize },
    #[error("rank {0} is not supported (rank must be at least 2)")]
    RankTooSmall(usize),
    #[error("rank {rank} exceeds the configured ceiling {ceiling}")]
    RankAboveCeiling { rank: usize, ceiling: usize },
    #[error("edge set is not a spanning tree: {0}")]
    NotSpanningTree(String),
    #[error("orientation does not choose a dart of non-tree edge {0}")]
    MissingOrientation(usize),
    #[error("invalid axis walk: {0}")]
    InvalidAxis(String),
    #[error("dart coloring is not a stable coloring of this graph")]
    UnstableColoring,
    #[error("dart {dart} out of range (graph has {dart_count} darts)")]
    DartOutOfRange { dart: usize, dart_count: usize },
    #[error("requested {requested} exceeds the budget of {budget}")]
    BudgetExceeded { requested: usize, budget: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
