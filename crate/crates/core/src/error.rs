use thiserror::Error;

use crate::loctrans::Obstruction;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("no orientation given for pair {{{0}, {1}}}")]
    MissingArc(usize, usize),
    #[error("both orientations given for pair {{{0}, {1}}}")]
    ConflictingArc(usize, usize),
    #[error("self loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("expected a tournament of order {expected}, got order {actual}")]
    WrongOrder { expected: usize, actual: usize },
    #[error("score sequence {0:?} matches no tournament class of order 4")]
    UnrecognizedScoreSequence(Vec<usize>),
    #[error("order {0} is even, an odd order is required")]
    EvenOrder(usize),
    #[error("order must be at least 1")]
    EmptyTournament,
    #[error("shrink ratio {0} is not in the open interval (0, 1)")]
    InvalidRatio(f64),
    #[error("({0}, {1}) is not an arc")]
    NotAnArc(usize, usize),
    #[error("order {actual} is too small, at least {required} vertices are needed")]
    OrderTooSmall { required: usize, actual: usize },
    #[error("empirical distribution is empty")]
    EmptyDistribution,
    #[error("tournament is not locally transitive: {0}")]
    NotLocallyTransitive(Obstruction),
    #[error("tournament is not balanced (vertex {vertex} has outdegree {outdegree})")]
    NotBalanced { vertex: usize, outdegree: usize },
    #[error("{0} is outside the open interval (0, 1)")]
    OutOfDomain(f64),
    #[error("invalid cyclic order: {0}")]
    InvalidOrder(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}
