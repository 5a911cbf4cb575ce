use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("halfspace system is unbounded")]
    Unbounded,
    #[error("affine map is singular")]
    SingularMap,
    #[error("degenerate body: {0}")]
    DegenerateBody(String),
    #[error("origin is not contained in the body")]
    OriginMissing,
    #[error("radial function base value is zero")]
    ZeroBase,
    #[error("route unsupported: {0}")]
    RouteUnsupported(String),
    #[error("projection contains no lattice points")]
    EmptyProjectionLattice,
    #[error("exponent out of range: {0}")]
    ExponentOutOfRange(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate body spec: {0}")]
    DegenerateSpec(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("hypotheses violated: {0}")]
    HypothesesViolated(String),
    #[error("no root: {0}")]
    NoRoot(String),
    #[error("profiles have no crossing point")]
    NoCrossing,
    #[error("i/o error: {0}")]
    Io(String),
    #[error("unknown checker: {0}")]
    UnknownChecker(String),
}

pub type Result<T> = std::result::Result<T, Error>;
