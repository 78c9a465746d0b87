use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::optim::Recorder;
use crate::simplex::SimplexPoint;
use crate::trace::Solution;
use crate::vector::{dot, norm2};

use super::{project_simplex, ProjectionAlgo};

/// Projected gradient with backtracking along the feasible direction
/// `xbar - x`, `xbar = P(x - step * grad f(x))`.
///
/// A trial `x + a (xbar - x)`, `a = decay^m`, is accepted when
/// `f(x) - f(x_new) >= -armijo * <grad f(x), xbar - x>`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PgdConfig {
    pub step: f64,
    pub decay: f64,
    pub armijo: f64,
    pub max_backtracks: usize,
    pub max_iters: usize,
    /// Stop once `|xbar - x| / step` is at most this.
    pub grad_tol: f64,
    pub target_value: Option<f64>,
    pub projection: ProjectionAlgo,
}

impl PgdConfig {
    pub fn new(step: f64) -> Self {
        Self {
            step,
            decay: 0.75,
            armijo: 1e-4,
            max_backtracks: 25,
            max_iters: 1000,
            grad_tol: 1e-8,
            target_value: None,
            projection: ProjectionAlgo::DuchiProject,
        }
    }

    /// Step `20 / L`.
    pub fn from_lipschitz(lipschitz: f64) -> Self {
        Self::new(20.0 / lipschitz)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidArgument("step must be positive"));
        }
        if !(self.decay > 0.0 && self.decay < 1.0) || !(self.armijo > 0.0 && self.armijo < 1.0) {
            return Err(Error::InvalidArgument("decay and armijo must lie in (0, 1)"));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be at least 1"));
        }
        Ok(())
    }
}

/// The trace's `grad_norm` column is the gradient-mapping norm
/// `|xbar - x| / step`.
pub fn pgd_linesearch<F: Objective + ?Sized>(f: &F, x0: &SimplexPoint, cfg: &PgdConfig) -> Result<Solution> {
    cfg.validate()?;
    if f.dim() != x0.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: x0.dim() });
    }
    let mut rec = Recorder::new();
    let mut x = x0.coords().to_vec();
    let (mut value, mut grad) = f.value_and_gradient(&x);
    let mut xbar = bar(&x, &grad, cfg);
    let mut mapping = gradient_mapping(&x, &xbar, cfg.step);
    rec.record(0, value, mapping, 0.0, 0);
    let stop = |v: f64, m: f64| m <= cfg.grad_tol || cfg.target_value.is_some_and(|t| v <= t);
    let mut converged = stop(value, mapping);
    let mut k = 0;
    while !converged && k < cfg.max_iters {
        let d: Vec<f64> = xbar.iter().zip(&x).map(|(a, b)| a - b).collect();
        let decrease = -cfg.armijo * dot(&grad, &d);
        let mut accepted = false;
        let mut trial = (x.clone(), value, 0.0, 0);
        for m in 0..=cfg.max_backtracks {
            let alpha = libm::pow(cfg.decay, m as f64);
            let xn: Vec<f64> = x.iter().zip(&xbar).map(|(a, b)| (1.0 - alpha) * a + alpha * b).collect();
            let fv = f.value(&xn);
            trial = (xn, fv, alpha, m);
            if value - fv >= decrease {
                accepted = true;
                break;
            }
        }
        if !accepted {
            rec.line_search_failed();
        }
        let (xn, _, alpha, m) = trial;
        x = xn;
        (value, grad) = f.value_and_gradient(&x);
        xbar = bar(&x, &grad, cfg);
        mapping = gradient_mapping(&x, &xbar, cfg.step);
        k += 1;
        rec.record(k, value, mapping, alpha, m);
        converged = stop(value, mapping);
    }
    Ok(Solution { x: SimplexPoint::new_unchecked(x), trace: rec.finish(converged) })
}

fn bar(x: &[f64], grad: &[f64], cfg: &PgdConfig) -> Vec<f64> {
    let y: Vec<f64> = x.iter().zip(grad).map(|(a, g)| a - cfg.step * g).collect();
    project_simplex(&y, cfg.projection).into_vec()
}

fn gradient_mapping(x: &[f64], xbar: &[f64], step: f64) -> f64 {
    let d: Vec<f64> = x.iter().zip(xbar).map(|(a, b)| a - b).collect();
    norm2(&d) / step
}
