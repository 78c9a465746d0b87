//! Riemannian solvers on the sphere for simplex-constrained problems.
//!
//! Every `had_*` entry point takes an objective over the simplex, starts from
//! `z0 = sqrt(x0)`, runs on the sphere against `g(z) = f(z * z)` and returns
//! `x = z * z`. The `*_sphere` variants run directly on a sphere point for any
//! objective over `z`, which is how the l1-ball solver is built.

mod aw;
mod bb;
mod prgd;
mod rgd;

use alloc::vec::Vec;

pub use aw::{aw_sphere, had_rgd_aw, AwConfig};
pub use bb::{bb_sphere, had_rgd_bb, had_rgd_bb_l1, l1_start, BbConfig, L1Solution};
pub use prgd::{had_prgd, prgd_sphere, tangent_space_steps, PrgdConfig};
pub use rgd::{had_rgd, rgd_sphere, RgdConfig};

use crate::error::{Error, Result};
use crate::hadamard::{hadamard_sqrt, hadamard_square};
use crate::manifold::{sphere, Geometry, ManifoldPoint};
use crate::objective::Objective;
use crate::simplex::SimplexPoint;
use crate::trace::{RunTrace, Solution, Stopwatch, TraceRecord};

/// Terminal sphere point and trace of a `*_sphere` solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereSolution {
    pub z: ManifoldPoint,
    pub trace: RunTrace,
}

pub(crate) struct Recorder {
    trace: RunTrace,
    clock: Stopwatch,
}

impl Recorder {
    pub(crate) fn new() -> Self {
        Self { trace: RunTrace::new(), clock: Stopwatch::start() }
    }

    pub(crate) fn record(&mut self, iteration: usize, value: f64, grad_norm: f64, step: f64, backtracks: usize) {
        let seconds = self.clock.seconds();
        self.trace.push(TraceRecord { iteration, value, grad_norm, step, seconds, backtracks });
    }

    pub(crate) fn line_search_failed(&mut self) {
        self.trace.line_search_failures += 1;
    }

    pub(crate) fn finish(self, converged: bool) -> RunTrace {
        self.trace.finish(converged)
    }
}

pub(crate) fn reached(value: f64, grad_norm: f64, grad_tol: f64, target: Option<f64>) -> bool {
    grad_norm <= grad_tol || target.is_some_and(|t| value <= t)
}

/// Value and Riemannian gradient at a sphere point.
pub(crate) fn value_and_rgrad<G: Objective + ?Sized>(g: &G, z: &[f64]) -> (f64, Vec<f64>) {
    let (v, e) = g.value_and_gradient(z);
    (v, sphere::project(z, &e))
}

pub(crate) fn simplex_start<F: Objective + ?Sized>(f: &F, x0: &SimplexPoint) -> Result<ManifoldPoint> {
    if f.dim() != x0.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: x0.dim() });
    }
    ManifoldPoint::new(Geometry::Sphere, hadamard_sqrt(x0.coords())?)
}

pub(crate) fn check_sphere<G: Objective + ?Sized>(g: &G, z0: &ManifoldPoint) -> Result<()> {
    if !matches!(z0.geometry(), Geometry::Sphere | Geometry::DoubleSphere) {
        return Err(Error::InvalidArgument("sphere solvers need a sphere point"));
    }
    if g.dim() != z0.coords().len() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: z0.coords().len() });
    }
    Ok(())
}

pub(crate) fn into_solution(run: SphereSolution) -> Solution {
    let x = hadamard_square(run.z.coords());
    Solution { x: SimplexPoint::new_unchecked(x), trace: run.trace }
}

pub(crate) fn positive(v: f64) -> bool {
    v > 0.0 && v.is_finite()
}
