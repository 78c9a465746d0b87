//! Comparison methods that work on the simplex directly: Euclidean
//! projection, projected gradient with a feasible-direction line search,
//! entropic mirror descent and Frank-Wolfe.
//!
//! Their traces use the same [`RunTrace`](crate::RunTrace) layout as the
//! sphere solvers; the `grad_norm` column holds each method's own
//! stationarity measure (documented per solver).

mod emda;
mod frank_wolfe;
mod pgd;
mod projection;

pub use emda::{emda, EmdaConfig};
pub use frank_wolfe::{frank_wolfe, FwConfig, FwStep};
pub use pgd::{pgd_linesearch, PgdConfig};
pub use projection::{project_simplex, ProjectionAlgo};
