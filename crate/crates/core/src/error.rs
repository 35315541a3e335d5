use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(
        "arrow {arrow} references vertex {vertex}, but the quiver has {vertex_count} vertices"
    )]
    ArrowOutOfRange {
        arrow: usize,
        vertex: usize,
        vertex_count: usize,
    },
    #[error("quiver has no vertices")]
    NoVertices,
    #[error("quiver contains a directed cycle through vertices {0:?}")]
    CyclicQuiver(Vec<usize>),
    #[error("quiver must have a unique source, found {0:?}")]
    MultipleSources(Vec<usize>),
    #[error("vertex {0} is not reachable from the source")]
    UnreachableVertex(usize),
    #[error("invalid dimension vector: {0}")]
    InvalidDims(String),
    #[error("the moduli space is empty: r_{vertex} = {rank} exceeds s_{vertex} = {incoming}")]
    EmptyModuli {
        vertex: usize,
        rank: u64,
        incoming: u64,
    },
    #[error("dimension vector is not strict at vertex {0} (r_i = s_i); run `simplify` first")]
    NotStrict(usize),
    #[error("operation needs every r_i = 1, but r_{0} != 1")]
    NotToric(usize),
    #[error(
        "weight entry {entry} at vertex {vertex} lies below the vanishing range (bound {bound})"
    )]
    OutOfBottRange {
        vertex: usize,
        entry: i64,
        bound: i64,
    },
    #[error("weight has {got} entries, vertex {vertex} has rank {expected}")]
    WeightLength {
        vertex: usize,
        expected: usize,
        got: usize,
    },
    #[error("sequence {0:?} is not weakly decreasing")]
    NotDominant(Vec<i64>),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("representation is not stable: w_{vertex} has rank {rank} < {expected}")]
    NotStable {
        vertex: usize,
        rank: usize,
        expected: usize,
    },
    #[error("theta = {0:?} is not a character: sum theta_i r_i != 0")]
    NotACharacter(Vec<i64>),
    #[error("grading is not pointed: {0}")]
    NotPointed(String),
    #[error("degree sequence is not weakly exceptional: Hom(E_{from}, E_{to}) != 0")]
    NotWeaklyExceptional { from: usize, to: usize },
    #[error("degree sequence is invalid: {0}")]
    InvalidDegrees(String),
    #[error("lattice search reached radius {radius} without stabilizing")]
    SearchBudgetExceeded { radius: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
