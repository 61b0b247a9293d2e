use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("lattice model mismatch: {left} vs {right}")]
    ModelMismatch { left: String, right: String },

    #[error("resolution {resolution} is below prefix length {prefix_len}")]
    ResolutionTooSmall { resolution: usize, prefix_len: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{slots} free coordinates exceed the enumeration cap")]
    TooManyFragments { slots: usize },

    #[error("elements are not disjoint")]
    NotDisjoint,

    #[error("element is not a fragment of the given element")]
    NotFragment,

    #[error("operator `{0}` is not positive")]
    NotPositive(String),

    #[error("kernel entry ({row},{col}) does not vanish at 0")]
    KernelNotZeroAtOrigin { row: usize, col: usize },

    #[error("tail entry {row} does not vanish at 0")]
    TailNotZeroAtOrigin { row: usize },

    #[error("integral weight at index {index} is not positive")]
    NonpositiveWeight { index: usize },

    #[error("tail columns are only allowed on eventually-constant domains")]
    TailOnFiniteDomain,

    #[error("closed form requires pure-kernel operators on a finite domain")]
    TailColumnsUnsupported,

    #[error("invalid piecewise-linear function: {0}")]
    InvalidFunction(String),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("set `{0}` is not laterally dense")]
    NotLaterallyDense(String),

    #[error("epsilon must be nonnegative")]
    NegativeEpsilon,

    #[error("{0}")]
    Inconsistent(String),

    #[error("cannot parse rational `{0}`")]
    ParseRational(String),

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("{0}")]
    Usage(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
