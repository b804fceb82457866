use thiserror::Error;

/// Errors raised by the library. Every variant corresponds to bad input or a
/// refused computation; none of them indicate an internal failure.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),

    #[error("duplicate vertex {0} in vertex set")]
    DuplicateVertex(usize),

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    #[error("graph carries no root/fresh labels")]
    Unlabeled,

    #[error("graph is already labeled; subdivide expects an unlabeled graph")]
    AlreadyLabeled,

    #[error("{what}: size {size} exceeds the configured limit {limit}")]
    OverLimit {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("q = {q} is not a probability for n = {n}, p = {p}; smallest valid n is {min_n}")]
    ProbabilityRange { n: u64, p: u32, q: f64, min_n: u64 },

    #[error("only {available} disjoint monochromatic pairs, {requested} requested")]
    InsufficientPairs { available: usize, requested: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
