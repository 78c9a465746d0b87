use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hadamard::{DoublePullback, Pullback};
use crate::manifold::{sphere, Geometry, ManifoldPoint};
use crate::objective::Objective;
use crate::simplex::SimplexPoint;
use crate::trace::{RunTrace, Solution};
use crate::vector::{dot, norm1, norm2};

use super::{check_sphere, into_solution, positive, reached, simplex_start, value_and_rgrad, Recorder, SphereSolution};

/// Barzilai-Borwein steps with a nonmonotone line search against the
/// running average `C_k` of past objective values.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BbConfig {
    /// First trial step.
    pub default_step: f64,
    /// Shrink factor applied while the nonmonotone test fails.
    pub decay: f64,
    /// Weight of the history in `C_k`.
    pub averaging: f64,
    pub armijo: f64,
    pub step_min: f64,
    pub step_max: f64,
    /// Shrinks per iteration before the run stops with a line search failure.
    pub max_shrinks: usize,
    pub max_iters: usize,
    pub grad_tol: f64,
    pub target_value: Option<f64>,
}

impl BbConfig {
    /// Settings for minimizers inside the simplex.
    pub fn interior() -> Self {
        Self {
            default_step: 3.0,
            decay: 0.5,
            averaging: 0.5,
            armijo: 0.1,
            step_min: 1e-10,
            step_max: 30.0,
            max_shrinks: 50,
            max_iters: 1000,
            grad_tol: 1e-8,
            target_value: None,
        }
    }

    /// Settings for minimizers on the boundary: default step
    /// `10 sqrt(2 n / L)`, decay 0.75.
    pub fn boundary(n: usize, lipschitz: f64) -> Self {
        Self { default_step: 10.0 * libm::sqrt(2.0 * n as f64 / lipschitz), decay: 0.75, ..Self::interior() }
    }

    pub fn validate(&self) -> Result<()> {
        if !positive(self.default_step) {
            return Err(Error::InvalidArgument("default step must be positive"));
        }
        if !(self.decay > 0.0 && self.decay < 1.0) || !(self.averaging > 0.0 && self.averaging < 1.0) {
            return Err(Error::InvalidArgument("decay and averaging must lie in (0, 1)"));
        }
        if !positive(self.armijo) {
            return Err(Error::InvalidArgument("armijo tolerance must be positive"));
        }
        if !(0.0 < self.step_min && self.step_min < self.step_max) {
            return Err(Error::InvalidArgument("need 0 < step_min < step_max"));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be at least 1"));
        }
        if !(self.grad_tol >= 0.0) {
            return Err(Error::InvalidArgument("grad_tol must be nonnegative"));
        }
        Ok(())
    }

    /// `|s|^2 / |<s, y>|` clamped to `[step_min, step_max]`; a vanishing
    /// denominator gives `step_max`.
    pub fn bb_step(&self, s: &[f64], y: &[f64]) -> f64 {
        let sy = dot(s, y).abs();
        if sy < 1e-30 {
            return self.step_max;
        }
        (dot(s, s) / sy).clamp(self.step_min, self.step_max)
    }
}

pub fn had_rgd_bb<F: Objective + ?Sized>(f: &F, x0: &SimplexPoint, cfg: &BbConfig) -> Result<Solution> {
    let z0 = simplex_start(f, x0)?;
    bb_sphere(&Pullback::new(f), &z0, cfg).map(into_solution)
}

pub fn bb_sphere<G: Objective + ?Sized>(g: &G, z0: &ManifoldPoint, cfg: &BbConfig) -> Result<SphereSolution> {
    cfg.validate()?;
    check_sphere(g, z0)?;
    let mut rec = Recorder::new();
    let mut z = z0.coords().to_vec();
    let (mut value, mut grad) = value_and_rgrad(g, &z);
    let mut gnorm = norm2(&grad);
    rec.record(0, value, gnorm, 0.0, 0);
    let mut converged = reached(value, gnorm, cfg.grad_tol, cfg.target_value);
    let (mut c, mut q) = (value, 1.0);
    let mut alpha = cfg.default_step;
    let mut k = 0;
    while !converged && k < cfg.max_iters {
        let slope = gnorm * gnorm;
        let mut shrinks = 0;
        let step = |a: f64| -> Vec<f64> { grad.iter().map(|d| -a * d).collect() };
        let mut y = sphere::exp(&z, &step(alpha));
        let mut gy = g.value(&y);
        while gy >= c - cfg.armijo * alpha * slope {
            if shrinks == cfg.max_shrinks {
                break;
            }
            alpha *= cfg.decay;
            shrinks += 1;
            y = sphere::exp(&z, &step(alpha));
            gy = g.value(&y);
        }
        if gy >= c - cfg.armijo * alpha * slope {
            rec.line_search_failed();
            break;
        }
        let (gv, gr) = value_and_rgrad(g, &y);
        let q_next = cfg.averaging * q + 1.0;
        c = (cfg.averaging * q * c + gv) / q_next;
        q = q_next;
        let s: Vec<f64> = y.iter().zip(&z).map(|(a, b)| a - b).collect();
        let dy: Vec<f64> = gr.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let taken = alpha;
        alpha = cfg.bb_step(&s, &dy);
        z = y;
        value = gv;
        grad = gr;
        gnorm = norm2(&grad);
        k += 1;
        rec.record(k, value, gnorm, taken, shrinks);
        converged = reached(value, gnorm, cfg.grad_tol, cfg.target_value);
    }
    let z = ManifoldPoint::new(z0.geometry().clone(), z).expect("exp keeps unit norm");
    Ok(SphereSolution { z, trace: rec.finish(converged) })
}

/// Result of the l1-ball solver.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Solution {
    /// `z_u * z_u - z_v * z_v`, inside the l1 ball.
    pub x: Vec<f64>,
    /// Terminal stacked `(z_u, z_v)` on the sphere in `R^{2n}`.
    pub z: ManifoldPoint,
    pub trace: RunTrace,
}

/// A point of the `2n`-sphere mapping to `x` with `|x|_1 <= 1`: the slack
/// `(1 - |x|_1) / (2n)` is added to every squared coordinate so it cancels
/// in `z_u^2 - z_v^2`.
pub fn l1_start(x: &[f64]) -> Result<ManifoldPoint> {
    let n = x.len();
    let r = norm1(x);
    if n == 0 || !(r <= 1.0 + 1e-10) {
        return Err(Error::Infeasible { residual: r - 1.0 });
    }
    let slack = (1.0 - r).max(0.0) / (2 * n) as f64;
    let mut z = Vec::with_capacity(2 * n);
    z.extend(x.iter().map(|&v| libm::sqrt(v.max(0.0) + slack)));
    z.extend(x.iter().map(|&v| libm::sqrt((-v).max(0.0) + slack)));
    let nz = norm2(&z);
    z.iter_mut().for_each(|v| *v /= nz);
    ManifoldPoint::new(Geometry::DoubleSphere, z)
}

/// Minimizes `f` over the l1 ball through `x = z_u^2 - z_v^2` with
/// `(z_u, z_v)` on the unit sphere of `R^{2n}`.
pub fn had_rgd_bb_l1<F: Objective + ?Sized>(f: &F, x0: &[f64], cfg: &BbConfig) -> Result<L1Solution> {
    if f.dim() != x0.len() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: x0.len() });
    }
    let g = DoublePullback::new(f);
    let run = bb_sphere(&g, &l1_start(x0)?, cfg)?;
    Ok(L1Solution { x: g.point(run.z.coords()), z: run.z, trace: run.trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{Linear, SquaredNorm};
    use crate::trace::RunStatus;
    use alloc::vec;

    #[test]
    fn clamp_rules() {
        let cfg = BbConfig::interior();
        assert_eq!(cfg.bb_step(&[10.0], &[0.1]), 30.0);
        assert_eq!(cfg.bb_step(&[1.0, 0.0], &[0.0, 1.0]), 30.0);
        assert_eq!(cfg.bb_step(&[1e-6], &[1e6]), 1e-10);
        assert_eq!(cfg.bb_step(&[1.0], &[-2.0]), 0.5);
    }

    #[test]
    fn accepted_steps_beat_the_running_average() {
        let f = SquaredNorm::centered(vec![0.4, 0.3, 0.2, 0.1], 1.0);
        let mut cfg = BbConfig::interior();
        cfg.grad_tol = 1e-12;
        let x0 = SimplexPoint::new(vec![0.7, 0.1, 0.1, 0.1]).unwrap();
        let sol = had_rgd_bb(&f, &x0, &cfg).unwrap();
        assert_eq!(sol.trace.status, RunStatus::Converged);
        let recs = &sol.trace.records;
        let (mut c, mut q) = (recs[0].value, 1.0);
        for w in recs.windows(2) {
            let slope = w[0].grad_norm * w[0].grad_norm;
            assert!(w[1].value < c - cfg.armijo * w[1].step * slope);
            let qn = cfg.averaging * q + 1.0;
            c = (cfg.averaging * q * c + w[1].value) / qn;
            q = qn;
        }
    }

    #[test]
    fn l1_start_maps_back() {
        let x = vec![0.2, -0.3, 0.0, 0.1];
        let z = l1_start(&x).unwrap();
        let g = DoublePullback::new(Linear::new(vec![0.0; 4]));
        for (a, b) in g.point(z.coords()).iter().zip(&x) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(l1_start(&[0.8, -0.3]).is_err());
    }

    #[test]
    fn l1_solver_reaches_interior_minimizer() {
        let c = vec![0.1, -0.2, 0.05];
        let f = SquaredNorm::centered(c.clone(), 1.0);
        let mut cfg = BbConfig::interior();
        cfg.grad_tol = 1e-12;
        cfg.max_iters = 5000;
        let sol = had_rgd_bb_l1(&f, &[0.0; 3], &cfg).unwrap();
        for (a, b) in sol.x.iter().zip(&c) {
            assert!((a - b).abs() < 1e-8, "{:?}", sol.x);
        }
    }
}
