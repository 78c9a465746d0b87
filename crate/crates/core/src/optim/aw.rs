use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hadamard::Pullback;
use crate::manifold::{sphere, ManifoldPoint};
use crate::objective::Objective;
use crate::simplex::SimplexPoint;
use crate::trace::Solution;
use crate::vector::{dot, norm2};

use super::{check_sphere, into_solution, positive, reached, simplex_start, value_and_rgrad, Recorder, SphereSolution};

/// Backtracking along the geodesic `exp_z(-a grad g(z))` with trial steps
/// `a = default_step * decay^m`, `m = 0..=max_backtracks`.
///
/// With `strict` (the default) a trial is accepted once the Armijo and the
/// curvature conditions hold together. With `strict = false` either one
/// suffices; that rule can accept steps that increase `g`, because the
/// curvature condition alone holds for overshooting steps.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AwConfig {
    pub default_step: f64,
    pub decay: f64,
    pub armijo: f64,
    pub wolfe: f64,
    pub max_backtracks: usize,
    pub max_iters: usize,
    pub grad_tol: f64,
    pub target_value: Option<f64>,
    pub strict: bool,
}

impl AwConfig {
    pub fn new(default_step: f64) -> Self {
        Self {
            default_step,
            decay: 0.75,
            armijo: 1e-4,
            wolfe: 0.9,
            max_backtracks: 25,
            max_iters: 1000,
            grad_tol: 1e-8,
            target_value: None,
            strict: true,
        }
    }

    /// Default step `10 sqrt(20 n / L)`, tuned for minimizers inside the
    /// simplex.
    pub fn interior(n: usize, lipschitz: f64) -> Self {
        Self::new(10.0 * libm::sqrt(20.0 * n as f64 / lipschitz))
    }

    /// Default step `10 sqrt(2 n / L)`, tuned for minimizers on the boundary.
    pub fn boundary(n: usize, lipschitz: f64) -> Self {
        Self::new(10.0 * libm::sqrt(2.0 * n as f64 / lipschitz))
    }

    pub fn validate(&self) -> Result<()> {
        if !positive(self.default_step) {
            return Err(Error::InvalidArgument("default step must be positive"));
        }
        if !(self.decay > 0.0 && self.decay < 1.0) {
            return Err(Error::InvalidArgument("decay must lie in (0, 1)"));
        }
        if !(0.0 < self.armijo && self.armijo < self.wolfe && self.wolfe < 1.0) {
            return Err(Error::InvalidArgument("need 0 < armijo < wolfe < 1"));
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

pub fn had_rgd_aw<F: Objective + ?Sized>(f: &F, x0: &SimplexPoint, cfg: &AwConfig) -> Result<Solution> {
    let z0 = simplex_start(f, x0)?;
    aw_sphere(&Pullback::new(f), &z0, cfg).map(into_solution)
}

pub fn aw_sphere<G: Objective + ?Sized>(g: &G, z0: &ManifoldPoint, cfg: &AwConfig) -> Result<SphereSolution> {
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
        let v: Vec<f64> = grad.iter().map(|d| -d).collect();
        let slope = gnorm * gnorm;
        let mut accepted = None;
        let mut last = None;
        for m in 0..=cfg.max_backtracks {
            let alpha = cfg.default_step * libm::pow(cfg.decay, m as f64);
            let trial: Vec<f64> = v.iter().map(|d| alpha * d).collect();
            let y = sphere::exp(&z, &trial);
            let (gy, ey) = g.value_and_gradient(&y);
            let armijo = gy <= value - cfg.armijo * alpha * slope;
            let derivative = dot(&ey, &sphere::geodesic_velocity(&z, &v, alpha));
            let wolfe = derivative >= -cfg.wolfe * slope;
            let ok = if cfg.strict { armijo && wolfe } else { armijo || wolfe };
            if ok {
                accepted = Some((y, alpha, m));
                break;
            }
            last = Some((y, alpha, m));
        }
        let (y, alpha, m) = match accepted {
            Some(a) => a,
            None => {
                rec.line_search_failed();
                last.expect("at least one trial")
            }
        };
        z = y;
        (value, grad) = value_and_rgrad(g, &z);
        gnorm = norm2(&grad);
        k += 1;
        rec.record(k, value, gnorm, alpha, m);
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
    fn stationary_start_converges_immediately() {
        let f = Linear::new(vec![2.0; 5]);
        let sol = had_rgd_aw(&f, &SimplexPoint::uniform(5), &AwConfig::new(1.0)).unwrap();
        assert_eq!(sol.trace.status, RunStatus::Converged);
        assert_eq!(sol.trace.records.len(), 1);
    }

    #[test]
    fn strict_mode_steps_satisfy_armijo() {
        let f = SquaredNorm::centered(vec![0.5, 0.3, 0.2], 1.0);
        let g = Pullback::new(&f);
        let mut cfg = AwConfig::new(5.0);
        cfg.max_iters = 30;
        cfg.grad_tol = 1e-12;
        let x0 = SimplexPoint::new(vec![0.1, 0.1, 0.8]).unwrap();
        let sol = had_rgd_aw(&f, &x0, &cfg).unwrap();
        let recs = &sol.trace.records;
        for w in recs.windows(2) {
            let slope = w[0].grad_norm * w[0].grad_norm;
            assert!(w[1].value <= w[0].value - cfg.armijo * w[1].step * slope + 1e-15);
        }
        assert!(g.value(&crate::hadamard::hadamard_sqrt(sol.x.coords()).unwrap()) < 1e-12);
    }

    #[test]
    fn table_defaults() {
        let c = AwConfig::interior(500, 2.0);
        assert!((c.default_step - 10.0 * libm::sqrt(5000.0)).abs() < 1e-9);
        let c = AwConfig::boundary(500, 2.0);
        assert!((c.default_step - 10.0 * libm::sqrt(500.0)).abs() < 1e-9);
        assert!(c.validate().is_ok());
    }
}
