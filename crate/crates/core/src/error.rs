use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("subspaces carry different metrics")]
    MetricMismatch,

    #[error("masses must be finite and strictly positive (got {0})")]
    NonPositiveMass(f64),

    #[error("mass vector must be non-empty")]
    EmptyMasses,

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid pair ({i},{j}) for {n} particles")]
    InvalidPair { i: usize, j: usize, n: usize },

    #[error("the two collision pairs must differ")]
    SamePair,

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("oracle supports subspaces of dimension at most {max}, got {got}")]
    OracleTooLarge { max: usize, got: usize },

    #[error("velocity lies inside the wall; reflection is undefined")]
    TangentialVelocity,

    #[error("start point lies on wall `{0}`")]
    DegenerateStart(String),

    #[error("angle {0} outside (0, pi]")]
    AngleOutOfRange(f64),

    #[error("planes are parallel")]
    ParallelPlanes,

    #[error("singular value decomposition did not converge")]
    SvdFailed,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
