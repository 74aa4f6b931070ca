use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} exceeds the degree bound")]
    DegreeExceeded(usize),
    #[error("graph is not simple: {0}")]
    NonSimple(String),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("infeasible family spec: {0}")]
    InfeasibleSpec(String),
    #[error("graph is not a {0}")]
    NotAFamilyMember(&'static str),
    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("alpha {alpha} is infeasible (need at least {required})")]
    InfeasibleAlpha { alpha: u64, required: u64 },
    #[error("witness is not uniform at the requested level: measured {measured}, bound {bound}")]
    NotUniform { measured: Rational, bound: Rational },
    #[error("witness support leaves the radius-{radius} ball of vertex {vertex}")]
    SupportViolation { vertex: usize, radius: usize },
    #[error("projection target is empty")]
    EmptySubgraph,
    #[error("two vertices of color {color} lie in the ball around {vertex}")]
    AmbiguousColor { vertex: usize, color: usize },
    #[error("malformed labeling: {0}")]
    MalformedLabeling(String),
    #[error("labeling was not accepted by the verifier")]
    NotAccepted,
    #[error("no threshold set meets the boundary bound; witness is not uniform as claimed")]
    NoQualifyingSet,
    #[error("value {0} lies outside [0, 1]")]
    OutOfRange(Rational),
    #[error("witness too rough: measured {measured} is not below eps' = {eps_prime}")]
    WitnessTooRough { measured: Rational, eps_prime: Rational },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn format(line: usize, msg: impl Into<String>) -> Self {
        Error::Format { line, msg: msg.into() }
    }
}
