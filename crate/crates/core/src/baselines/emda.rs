use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::optim::Recorder;
use crate::simplex::SimplexPoint;
use crate::trace::Solution;
use crate::vector::norm2;

/// Entropic mirror descent with a constant step.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EmdaConfig {
    pub step: f64,
    pub max_iters: usize,
    /// Stop once `|x_{k+1} - x_k| / step` is at most this.
    pub grad_tol: f64,
    pub target_value: Option<f64>,
}

impl EmdaConfig {
    pub fn new(step: f64) -> Self {
        Self { step, max_iters: 1000, grad_tol: 1e-8, target_value: None }
    }
}

/// `x_{k+1} ~ x_k * exp(-step * grad f(x_k))`, renormalized. The exponent is
/// shifted by its maximum before exponentiation. The trace's `grad_norm`
/// column is `|x_{k+1} - x_k| / step`.
pub fn emda<F: Objective + ?Sized>(f: &F, x0: &SimplexPoint, cfg: &EmdaConfig) -> Result<Solution> {
    if !(cfg.step > 0.0 && cfg.step.is_finite()) || cfg.max_iters == 0 {
        return Err(Error::InvalidArgument("EMDA needs a positive step and at least one iteration"));
    }
    if f.dim() != x0.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: x0.dim() });
    }
    if x0.coords().iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidArgument("EMDA needs a strictly positive start"));
    }
    let mut rec = Recorder::new();
    let mut x = x0.coords().to_vec();
    let (mut value, mut grad) = f.value_and_gradient(&x);
    let mut next = update(&x, &grad, cfg.step);
    let mut moved = distance(&x, &next) / cfg.step;
    rec.record(0, value, moved, 0.0, 0);
    let stop = |v: f64, m: f64| m <= cfg.grad_tol || cfg.target_value.is_some_and(|t| v <= t);
    let mut converged = stop(value, moved);
    let mut k = 0;
    while !converged && k < cfg.max_iters {
        x = next;
        (value, grad) = f.value_and_gradient(&x);
        next = update(&x, &grad, cfg.step);
        moved = distance(&x, &next) / cfg.step;
        k += 1;
        rec.record(k, value, moved, cfg.step, 0);
        converged = stop(value, moved);
    }
    Ok(Solution { x: SimplexPoint::new_unchecked(x), trace: rec.finish(converged) })
}

fn update(x: &[f64], grad: &[f64], step: f64) -> Vec<f64> {
    let shift = grad.iter().map(|g| -step * g).fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = x.iter().zip(grad).map(|(xi, g)| xi * libm::exp(-step * g - shift)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|v| v / total).collect()
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm2(&d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::Linear;
    use alloc::vec;

    #[test]
    fn constant_gradient_is_a_fixed_point() {
        let f = Linear::new(vec![3.0; 4]);
        let x0 = SimplexPoint::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let sol = emda(&f, &x0, &EmdaConfig::new(0.5)).unwrap();
        for (a, b) in sol.x.coords().iter().zip(x0.coords()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn mass_leaves_the_penalized_coordinate() {
        let f = Linear::new(vec![1.0, 0.0, 0.0]);
        let mut cfg = EmdaConfig::new(0.3);
        cfg.max_iters = 20;
        cfg.grad_tol = 0.0;
        let x0 = SimplexPoint::uniform(3);
        let sol = emda(&f, &x0, &cfg).unwrap();
        let first: Vec<f64> = sol.trace.records.iter().map(|r| r.value).collect();
        assert!(first.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn rejects_boundary_start() {
        let f = Linear::new(vec![1.0, 0.0]);
        assert!(emda(&f, &SimplexPoint::vertex(2, 0), &EmdaConfig::new(0.1)).is_err());
    }
}
