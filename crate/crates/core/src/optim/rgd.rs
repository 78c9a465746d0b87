use crate::error::{Error, Result};
use crate::hadamard::Pullback;
use crate::manifold::{sphere, ManifoldPoint};
use crate::objective::Objective;
use crate::simplex::SimplexPoint;
use crate::trace::Solution;
use crate::vector::norm2;

use super::{check_sphere, into_solution, positive, reached, simplex_start, value_and_rgrad, Recorder, SphereSolution};

/// Fixed-step Riemannian gradient descent.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RgdConfig {
    pub step_size: f64,
    pub max_iters: usize,
    /// Stop once the Riemannian gradient norm is at most this.
    pub grad_tol: f64,
    /// Stop once the objective is at most this.
    pub target_value: Option<f64>,
}

impl RgdConfig {
    pub fn new(step_size: f64) -> Self {
        Self { step_size, max_iters: 1000, grad_tol: 1e-8, target_value: None }
    }

    /// Step `1 / L~` with `L~ = 4L + 2M` taken from the objective, if known.
    pub fn from_objective<F: Objective + ?Sized>(f: &F) -> Option<Self> {
        let lt = 4.0 * f.lipschitz_grad()? + 2.0 * f.grad_inf_bound()?;
        (lt > 0.0).then(|| Self::new(1.0 / lt))
    }

    pub fn validate(&self) -> Result<()> {
        if !positive(self.step_size) {
            return Err(Error::InvalidArgument("step size must be positive"));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be at least 1"));
        }
        if !(self.grad_tol >= 0.0) {
            return Err(Error::InvalidArgument("grad_tol must be nonnegative"));
        }
        Ok(())
    }
}

/// `z_{k+1} = exp_{z_k}(-step * grad g(z_k))` from `z0 = sqrt(x0)`.
pub fn had_rgd<F: Objective + ?Sized>(f: &F, x0: &SimplexPoint, cfg: &RgdConfig) -> Result<Solution> {
    let z0 = simplex_start(f, x0)?;
    rgd_sphere(&Pullback::new(f), &z0, cfg).map(into_solution)
}

/// Fixed-step Riemannian gradient descent for any objective over a sphere.
pub fn rgd_sphere<G: Objective + ?Sized>(g: &G, z0: &ManifoldPoint, cfg: &RgdConfig) -> Result<SphereSolution> {
    cfg.validate()?;
    check_sphere(g, z0)?;
    let mut rec = Recorder::new();
    let mut z = z0.coords().to_vec();
    let (mut value, mut grad) = value_and_rgrad(g, &z);
    let mut gnorm = norm2(&grad);
    rec.record(0, value, gnorm, 0.0, 0);
    let mut converged = reached(value, gnorm, cfg.grad_tol, cfg.target_value);
    let mut k = 0;
    while !converged && k < cfg.max_iters {
        let v: alloc::vec::Vec<f64> = grad.iter().map(|d| -cfg.step_size * d).collect();
        z = sphere::exp(&z, &v);
        (value, grad) = value_and_rgrad(g, &z);
        gnorm = norm2(&grad);
        k += 1;
        rec.record(k, value, gnorm, cfg.step_size, 0);
        converged = reached(value, gnorm, cfg.grad_tol, cfg.target_value);
    }
    let z = ManifoldPoint::new(z0.geometry().clone(), z).expect("exp keeps unit norm");
    Ok(SphereSolution { z, trace: rec.finish(converged) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{Linear, SquaredNorm};
    use crate::trace::RunStatus;
    use alloc::vec;

    #[test]
    fn constant_on_simplex_returns_start() {
        let f = Linear::new(vec![1.0; 4]);
        let x0 = SimplexPoint::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let sol = had_rgd(&f, &x0, &RgdConfig::new(0.1)).unwrap();
        assert_eq!(sol.trace.status, RunStatus::Converged);
        assert_eq!(sol.trace.iterations(), 0);
        for (a, b) in sol.x.coords().iter().zip(x0.coords()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_config_and_dimension() {
        let f = Linear::new(vec![1.0; 3]);
        assert!(had_rgd(&f, &SimplexPoint::uniform(3), &RgdConfig::new(0.0)).is_err());
        assert!(had_rgd(&f, &SimplexPoint::uniform(4), &RgdConfig::new(0.1)).is_err());
    }

    #[test]
    fn converges_to_interior_center() {
        let n = 6;
        let u = vec![1.0 / n as f64; n];
        let f = SquaredNorm::centered(u.clone(), 1.0);
        let x0 = SimplexPoint::new(vec![0.5, 0.1, 0.1, 0.1, 0.1, 0.1]).unwrap();
        let mut cfg = RgdConfig::from_objective(&f).unwrap();
        cfg.max_iters = 500;
        cfg.grad_tol = 0.0;
        cfg.target_value = Some(1e-10);
        let sol = had_rgd(&f, &x0, &cfg).unwrap();
        assert_eq!(sol.trace.status, RunStatus::Converged);
        assert!(f.value(sol.x.coords()) <= 1e-10);
    }
}
