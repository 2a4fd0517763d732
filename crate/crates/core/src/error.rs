use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, got {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("generator a{index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },

    #[error("transvection indices must differ (got i = j = {0})")]
    DegenerateTransvection(usize),

    #[error("cannot parse word {input:?} at byte {position}")]
    WordParse { input: String, position: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("edge set contains a cycle")]
    NotAForest,

    #[error("graph is a topological circle with no protected vertex")]
    CircleWithoutVertex,

    #[error("trivial word among wedge inputs")]
    TrivialWord,

    #[error("core undefined for a rank 0 graph without basepoint")]
    RankZeroCore,

    #[error("edge set is not a spanning tree")]
    NotSpanningTree,

    #[error("invalid marking: {0}")]
    InvalidMarking(String),

    #[error("not an automorphism")]
    NotAutomorphism,

    #[error("result violates the spine valence policy: {0}")]
    ValencePolicy(String),

    #[error("vertex must be in mode {0}")]
    WrongMode(&'static str),

    #[error("invalid basis embedding {m} -> {n}")]
    InvalidEmbedding { m: usize, n: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("invalid loop: {0}")]
    InvalidLoop(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("search budget {budget} exceeds the hard cap {cap}")]
    BudgetTooLarge { budget: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
