use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::optim::Recorder;
use crate::simplex::SimplexPoint;
use crate::trace::Solution;
use crate::vector::{argmin, dot};

/// Step-size rule along the Frank-Wolfe direction.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FwStep {
    /// `2 / (k + 2)`.
    Schedule,
    /// Exact minimization along the segment using the Hessian-vector
    /// product; exact for quadratics.
    ExactQuadratic,
    /// `min(gamma_max, gap / (L |d|^2))` with a known gradient Lipschitz
    /// constant.
    DemyanovRubinov { lipschitz: f64 },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FwConfig {
    pub max_iters: usize,
    pub step: FwStep,
    /// Move mass directly from the worst support vertex to the best vertex.
    /// Needs [`FwStep::ExactQuadratic`].
    pub pairwise: bool,
    /// Stop once the duality gap `<grad f(x), x - s>` is at most this.
    pub gap_tol: f64,
    pub target_value: Option<f64>,
}

impl FwConfig {
    pub fn new(max_iters: usize, step: FwStep) -> Self {
        Self { max_iters, step, pairwise: false, gap_tol: 1e-8, target_value: None }
    }
}

/// Frank-Wolfe over the simplex. The linear minimization oracle is the
/// vertex with the smallest gradient entry (first index on ties). The
/// trace's `grad_norm` column is the duality gap.
pub fn frank_wolfe<F: Objective + ?Sized>(f: &F, x0: &SimplexPoint, cfg: &FwConfig) -> Result<Solution> {
    if f.dim() != x0.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: x0.dim() });
    }
    if cfg.max_iters == 0 {
        return Err(Error::InvalidArgument("max_iters must be at least 1"));
    }
    if let FwStep::DemyanovRubinov { lipschitz } = cfg.step {
        if !(lipschitz > 0.0) {
            return Err(Error::InvalidArgument("Lipschitz constant must be positive"));
        }
    }
    if cfg.pairwise && cfg.step != FwStep::ExactQuadratic {
        return Err(Error::InvalidArgument("pairwise steps need the exact quadratic line search"));
    }
    if cfg.step == FwStep::ExactQuadratic && !f.has_hessian() {
        return Err(Error::MissingHessian);
    }
    let n = f.dim();
    let mut rec = Recorder::new();
    let mut x = x0.coords().to_vec();
    let (mut value, mut grad) = f.value_and_gradient(&x);
    let mut s = argmin(&grad);
    let mut gap = dot(&grad, &x) - grad[s];
    rec.record(0, value, gap, 0.0, 0);
    let stop = |v: f64, g: f64| g <= cfg.gap_tol || cfg.target_value.is_some_and(|t| v <= t);
    let mut converged = stop(value, gap);
    let mut k = 0;
    while !converged && k < cfg.max_iters {
        // direction d = e_s - e_away (pairwise) or e_s - x, with max step
        let (d, gamma_max, away) = if cfg.pairwise {
            let a = away_vertex(&x, &grad);
            let mut d = alloc::vec![0.0; n];
            d[s] += 1.0;
            d[a] -= 1.0;
            (d, x[a], Some(a))
        } else {
            let mut d: Vec<f64> = x.iter().map(|v| -v).collect();
            d[s] += 1.0;
            (d, 1.0, None)
        };
        let slope = dot(&grad, &d);
        let gamma = match cfg.step {
            FwStep::Schedule => 2.0 / (k as f64 + 2.0),
            FwStep::ExactQuadratic => {
                let hd = f.hessian_vec(&x, &d).ok_or(Error::MissingHessian)?;
                let curv = dot(&d, &hd);
                if curv > 0.0 {
                    (-slope / curv).clamp(0.0, gamma_max)
                } else if slope < 0.0 {
                    gamma_max
                } else {
                    0.0
                }
            }
            FwStep::DemyanovRubinov { lipschitz } => {
                let dd = dot(&d, &d);
                if dd > 0.0 {
                    (-slope / (lipschitz * dd)).clamp(0.0, gamma_max)
                } else {
                    0.0
                }
            }
        };
        match away {
            Some(a) => {
                x[s] += gamma;
                x[a] = if gamma == gamma_max { 0.0 } else { x[a] - gamma };
            }
            None => {
                x.iter_mut().for_each(|v| *v *= 1.0 - gamma);
                x[s] += gamma;
            }
        }
        (value, grad) = f.value_and_gradient(&x);
        s = argmin(&grad);
        gap = dot(&grad, &x) - grad[s];
        k += 1;
        rec.record(k, value, gap, gamma, 0);
        converged = stop(value, gap);
    }
    Ok(Solution { x: SimplexPoint::new_unchecked(x), trace: rec.finish(converged) })
}

/// Support vertex with the largest gradient entry (first index on ties).
fn away_vertex(x: &[f64], grad: &[f64]) -> usize {
    let mut best = None;
    for (i, (&xi, &gi)) in x.iter().zip(grad).enumerate() {
        if xi > 0.0 && best.is_none_or(|(_, g)| gi > g) {
            best = Some((i, gi));
        }
    }
    best.map_or(0, |(i, _)| i)
}
