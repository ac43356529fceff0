//! Crate-wide error type.

/// Errors reported by toolkit operations.
///
/// Every operation is total over its declared domain; an `Error` always
/// means the input violated a documented precondition (bad dimensions, a
/// forbidden extended value, an exceeded enumeration cap, …), never an
/// internal numeric failure — arithmetic is exact.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("undefined extended sum: TOP + BOTTOM")]
    UndefinedSum,

    #[error("BOTTOM values are not allowed in {0}")]
    BottomValue(&'static str),

    #[error("invalid rational literal: {0:?}")]
    InvalidRational(String),

    #[error("zero denominator in rational literal")]
    ZeroDenominator,

    #[error("duplicate grid point at index {0}")]
    DuplicateGridPoint(usize),

    #[error("enumeration cap exceeded: {cap_name} allows {cap}, instance needs {got}")]
    CapExceeded {
        cap_name: &'static str,
        cap: usize,
        got: usize,
    },

    #[error("function has an empty effective domain")]
    EmptyDomain,

    #[error("{0} must be sublinear (every piece offset zero)")]
    NotSublinear(&'static str),

    #[error("outer function must be increasing (all piece slopes nonnegative)")]
    NotIncreasing,

    #[error("{0}")]
    Unsupported(String),

    #[error("polyhedron is unbounded where a polytope was required")]
    UnboundedPolyhedron,

    #[error("epsilon must be nonnegative")]
    NegativeEpsilon,

    #[error("the infimal convolution is not infinitesimally exact at the supplied point")]
    NotInfinitesimallyExact,
}

pub type Result<T> = std::result::Result<T, Error>;
