use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the library. Solver runs never return these for
/// numerical trouble; that shows up in the [`crate::RunStatus`] of a trace.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An entry that must be nonnegative was below the clamp threshold.
    NegativeEntry { index: usize, value: f64 },
    /// A point violates the feasibility invariant of its set.
    Infeasible { residual: f64 },
    /// Vector lengths do not agree.
    DimensionMismatch { expected: usize, found: usize },
    /// The objective has no Hessian-vector product.
    MissingHessian,
    /// A configuration or argument is outside its allowed range.
    InvalidArgument(&'static str),
    /// An iterative routine hit its iteration cap.
    NonConvergence { iterations: usize },
    /// The l1-ball checks require a convex objective.
    NonconvexL1,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NegativeEntry { index, value } => {
                write!(f, "entry {index} is negative ({value:e})")
            }
            Error::Infeasible { residual } => {
                write!(f, "point is infeasible (residual {residual:e})")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::MissingHessian => write!(f, "objective has no Hessian-vector product"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::NonConvergence { iterations } => {
                write!(f, "no convergence after {iterations} iterations")
            }
            Error::NonconvexL1 => write!(f, "l1-ball analysis requires a convex objective"),
        }
    }
}

impl core::error::Error for Error {}
