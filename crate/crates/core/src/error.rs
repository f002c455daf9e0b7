use thiserror::Error;

use crate::delaunay::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("invalid grid window: {0}")]
    InvalidWindow(String),
    #[error("evaluation grid exceeds a validity window")]
    WindowMismatch,
    #[error("no samples survive the margin shrink; window too small for margin {margin}")]
    EmptyAfterShrink { margin: f64 },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("fidelity {eps} is not resolvable for this window")]
    InfeasibleFidelity { eps: f64 },
    #[error("invalid piecewise-linear data: {0}")]
    InvalidPiecewiseLinear(String),
    #[error("point {0} lies outside the function domain")]
    OutOfDomain(String),
    #[error("no mean-value witness found on ({a}, {b})")]
    NoWitness { a: String, b: String },
    #[error("empty slice at the requested source point; graph under-sampled")]
    EmptySlice,
    #[error("degenerate (collinear) input")]
    Degenerate,
    #[error("sites {0} and {1} coincide")]
    DuplicateSites(usize, usize),
    #[error("general position violated: {0:?}")]
    GeneralPositionViolation(Violation),
    #[error("query point lies outside the convex hull of the sites")]
    OutsideHull,
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("b is not a regular value: gradient lower bound {delta:.3e} below {threshold:.3e}")]
    NotRegularValue { delta: f64, threshold: f64 },
    #[error("derivative deviation does not decrease (final {last:.3e}, earlier {earlier:.3e})")]
    DerivativeDivergence { last: f64, earlier: f64 },
    #[error("family member {n} fails the convexity certificate")]
    NotConvex { n: u64 },
    #[error("fiber level must be nonzero")]
    ZeroLevel,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}
