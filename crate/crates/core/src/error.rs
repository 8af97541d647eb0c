use thiserror::Error;

use crate::indexpair::PairViolation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("simplex has no vertices")]
    EmptySimplex,

    #[error("malformed simplex [{0}]: repeated vertex")]
    RepeatedVertex(String),

    #[error("simplex [{0}] is not part of the complex")]
    UnknownSimplex(String),

    #[error("{0} is not closed")]
    NotClosed(&'static str),

    #[error("{0} is not a subset of {1}")]
    NotSubset(&'static str, &'static str),

    #[error("apex label {0:?} collides with an existing vertex")]
    ApexCollision(String),

    #[error("not a partition: simplex [{0}] is covered twice")]
    NotAPartition(String),

    #[error("not a multivector: [{0}] lies between two members but is excluded")]
    NotAMultivector(String),

    #[error("empty multivector")]
    EmptyMultivector,

    #[error("objects are defined over different complexes")]
    ComplexMismatch,

    #[error("set is not invariant under the field")]
    NotInvariant,

    #[error("neighborhood does not isolate the invariant set")]
    NotIsolated,

    #[error("pair needs an isolating neighborhood")]
    MissingNeighborhood,

    #[error("pairs live in different neighborhoods")]
    NeighborhoodMismatch,

    #[error("invalid index pair: {0}")]
    InvalidPair(PairViolation),

    #[error("index changed between pairs of one invariant set: {0:?} vs {1:?}")]
    IndexMismatch(Vec<usize>, Vec<usize>),

    #[error("diagram is malformed: {0}")]
    BadDiagram(String),

    #[error("rank query [{i}, {j}] outside 1..={len}")]
    OutOfRange { i: usize, j: usize, len: usize },

    #[error("unknown render format {0:?}")]
    UnknownFormat(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("step {step}: {source}")]
    Step { step: usize, source: Box<Error> },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn at_step(step: usize, err: Error) -> Error {
        Error::Step {
            step,
            source: Box::new(err),
        }
    }
}
