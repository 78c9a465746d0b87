use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::hadamard::Pullback;
use crate::manifold::{sphere, ManifoldPoint, TangentVector};
use crate::objective::Objective;
use crate::simplex::SimplexPoint;
use crate::trace::Solution;
use crate::vector::norm2;

use super::{
    check_sphere, into_solution, positive, reached, simplex_start, value_and_rgrad, Recorder, RgdConfig, SphereSolution,
};

/// Perturbed Riemannian gradient descent.
///
/// Plain gradient steps are taken while the gradient norm exceeds
/// `perturb_threshold`. Below it, a random tangent perturbation of radius
/// `perturb_radius` is refined by up to `tangent_iters` gradient steps on
/// `s -> g(exp_z(s))`, stopping early once `|s|` reaches `escape_radius`.
/// An episode that lowers `g` by less than the escape decrease ends the run
/// as converged at the pre-perturbation point.
///
/// `perturb_radius = 0` disables perturbation: the method is then exactly
/// [`had_rgd`](super::had_rgd) with the embedded [`RgdConfig`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PrgdConfig {
    pub rgd: RgdConfig,
    pub perturb_threshold: f64,
    pub perturb_radius: f64,
    pub tangent_step: f64,
    pub escape_radius: f64,
    pub tangent_iters: usize,
    /// Scale on the final tangent step taken when `|s|` crosses the escape
    /// radius.
    pub final_scale: f64,
    pub hessian_lipschitz: Option<f64>,
    /// Minimum decrease of an escape episode; defaults to
    /// `0.1 * sqrt(eps^3 / rho)`.
    pub escape_decrease: Option<f64>,
}

impl PrgdConfig {
    /// Defaults derived from the gradient step and tolerance: threshold
    /// `10 * grad_tol`, radius equal to the threshold, tangent step equal to
    /// the gradient step, escape radius `sqrt(eps / rho)` with `rho = 1`.
    pub fn new(rgd: RgdConfig) -> Self {
        let eps = 10.0 * rgd.grad_tol;
        Self {
            perturb_threshold: eps,
            perturb_radius: eps,
            tangent_step: rgd.step_size,
            escape_radius: libm::sqrt(eps),
            tangent_iters: 1000,
            final_scale: rgd.step_size,
            hessian_lipschitz: None,
            escape_decrease: None,
            rgd,
        }
    }

    pub fn rho(&self) -> f64 {
        self.hessian_lipschitz.unwrap_or(1.0)
    }

    pub fn min_escape_decrease(&self) -> f64 {
        self.escape_decrease.unwrap_or_else(|| 0.1 * libm::sqrt(libm::pow(self.perturb_threshold, 3.0) / self.rho()))
    }

    pub fn validate(&self) -> Result<()> {
        self.rgd.validate()?;
        if !(self.perturb_threshold >= 0.0) || !(self.perturb_radius >= 0.0) {
            return Err(Error::InvalidArgument("perturbation threshold and radius must be nonnegative"));
        }
        if !positive(self.tangent_step) || !positive(self.final_scale) {
            return Err(Error::InvalidArgument("tangent step and final scale must be positive"));
        }
        if self.perturb_radius > 0.0 && (!(self.escape_radius > 0.0) || self.tangent_iters == 0) {
            return Err(Error::InvalidArgument("escape radius and tangent iterations must be positive"));
        }
        if self.hessian_lipschitz.is_some_and(|r| !positive(r)) {
            return Err(Error::InvalidArgument("Hessian Lipschitz constant must be positive"));
        }
        Ok(())
    }
}

pub fn had_prgd<F: Objective + ?Sized>(f: &F, x0: &SimplexPoint, cfg: &PrgdConfig, seed: u64) -> Result<Solution> {
    let z0 = simplex_start(f, x0)?;
    prgd_sphere(&Pullback::new(f), &z0, cfg, seed).map(into_solution)
}

pub fn prgd_sphere<G: Objective + ?Sized>(
    g: &G,
    z0: &ManifoldPoint,
    cfg: &PrgdConfig,
    seed: u64,
) -> Result<SphereSolution> {
    cfg.validate()?;
    if cfg.perturb_radius == 0.0 {
        return super::rgd_sphere(g, z0, &cfg.rgd);
    }
    check_sphere(g, z0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_iters = cfg.rgd.max_iters;
    let alpha = cfg.rgd.step_size;
    let mut rec = Recorder::new();
    let mut z = z0.coords().to_vec();
    let (mut value, mut grad) = value_and_rgrad(g, &z);
    let mut gnorm = norm2(&grad);
    rec.record(0, value, gnorm, 0.0, 0);
    let mut converged = reached(value, f64::INFINITY, 0.0, cfg.rgd.target_value);
    let mut k = 0;
    while !converged && k < max_iters {
        if gnorm > cfg.perturb_threshold {
            let v: Vec<f64> = grad.iter().map(|d| -alpha * d).collect();
            z = sphere::exp(&z, &v);
            (value, grad) = value_and_rgrad(g, &z);
            gnorm = norm2(&grad);
            k += 1;
            rec.record(k, value, gnorm, alpha, 0);
            converged = reached(value, f64::INFINITY, 0.0, cfg.rgd.target_value);
            continue;
        }
        let xi = tangent_ball_sample(&mut rng, &z, cfg.perturb_radius);
        let s0: Vec<f64> = xi.iter().map(|v| cfg.tangent_step * v).collect();
        let (candidate, steps) = escape_steps(g, &z, s0, cfg, (max_iters - k).min(cfg.tangent_iters));
        k += steps;
        let (cv, cg) = value_and_rgrad(g, &candidate);
        if value - cv < cfg.min_escape_decrease() {
            rec.record(k, value, gnorm, 0.0, 0);
            converged = true;
        } else {
            z = candidate;
            value = cv;
            grad = cg;
            gnorm = norm2(&grad);
            rec.record(k, value, gnorm, cfg.tangent_step, 0);
            converged = reached(value, f64::INFINITY, 0.0, cfg.rgd.target_value);
        }
    }
    let z = ManifoldPoint::new(z0.geometry().clone(), z).expect("exp keeps unit norm");
    Ok(SphereSolution { z, trace: rec.finish(converged) })
}

/// Gradient steps on `s -> g(exp_z(s))` starting from `s0`. Returns
/// `exp_z(Proj_z s)` for the final tangent iterate and the number of steps
/// taken.
pub fn tangent_space_steps<G: Objective + ?Sized>(
    g: &G,
    z: &ManifoldPoint,
    s0: &TangentVector,
    cfg: &PrgdConfig,
) -> Result<(ManifoldPoint, usize)> {
    cfg.validate()?;
    check_sphere(g, z)?;
    let (point, steps) = escape_steps(g, z.coords(), s0.coords.clone(), cfg, cfg.tangent_iters);
    Ok((ManifoldPoint::new(z.geometry().clone(), point).expect("exp keeps unit norm"), steps))
}

fn escape_steps<G: Objective + ?Sized>(
    g: &G,
    z: &[f64],
    mut s: Vec<f64>,
    cfg: &PrgdConfig,
    max_steps: usize,
) -> (Vec<f64>, usize) {
    let eta = cfg.tangent_step;
    let mut steps = 0;
    for j in 1..=max_steps {
        steps = j;
        let w = g.gradient(&sphere::exp(z, &s));
        let grad = sphere::exp_pullback_gradient(z, &s, &w);
        let next: Vec<f64> = s.iter().zip(&grad).map(|(a, d)| a - eta * d).collect();
        if norm2(&next) >= cfg.escape_radius {
            s = s.iter().zip(&grad).map(|(a, d)| a - cfg.final_scale * eta * d).collect();
            break;
        }
        s = next;
    }
    (sphere::exp(z, &sphere::project(z, &s)), steps)
}

/// Uniform draw from the radius-`r` ball of the tangent space at `z`.
fn tangent_ball_sample(rng: &mut ChaCha8Rng, z: &[f64], r: f64) -> Vec<f64> {
    let n = z.len();
    if n < 2 {
        return alloc::vec![0.0; n];
    }
    loop {
        let gauss: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let t = sphere::project(z, &gauss);
        let nt = norm2(&t);
        if nt > 0.0 {
            let u: f64 = rng.random();
            let radius = r * libm::pow(u, 1.0 / (n - 1) as f64);
            return t.into_iter().map(|v| v * radius / nt).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{Linear, SquaredNorm};
    use crate::trace::RunStatus;
    use crate::vector::dot;
    use alloc::vec;

    #[test]
    fn zero_radius_matches_plain_rgd() {
        let f = SquaredNorm::centered(vec![0.1, 0.2, 0.7], 1.0);
        let x0 = SimplexPoint::uniform(3);
        let mut rgd = RgdConfig::new(0.05);
        rgd.max_iters = 50;
        rgd.grad_tol = 0.0;
        let mut cfg = PrgdConfig::new(rgd.clone());
        cfg.perturb_radius = 0.0;
        let a = had_prgd(&f, &x0, &cfg, 7).unwrap();
        let b = super::super::had_rgd(&f, &x0, &rgd).unwrap();
        assert_eq!(a.x, b.x);
        let strip = |s: &Solution| {
            s.trace.records.iter().map(|r| (r.iteration, r.value, r.grad_norm, r.step)).collect::<Vec<_>>()
        };
        assert_eq!(strip(&a), strip(&b));
    }

    #[test]
    fn stationary_pullback_returns_exp_of_start() {
        let f = Linear::new(vec![1.0; 4]);
        let g = Pullback::new(&f);
        let z = ManifoldPoint::on_sphere(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        let s0 = z.tangent_project(&[0.01, -0.01, 0.0, 0.0]);
        let cfg = PrgdConfig::new(RgdConfig::new(0.1));
        let (out, _) = tangent_space_steps(&g, &z, &s0, &cfg).unwrap();
        let want = z.exp_map(&s0);
        for (a, b) in out.coords().iter().zip(want.coords()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn single_step_without_escape_radius() {
        let f = SquaredNorm::new(3, -1.0);
        let g = Pullback::new(&f);
        let z = ManifoldPoint::on_sphere(&[1.0, 2.0, 3.0]).unwrap();
        let s0 = z.tangent_project(&[0.0, 0.01, -0.02]);
        let mut cfg = PrgdConfig::new(RgdConfig::new(0.1));
        cfg.escape_radius = f64::INFINITY;
        cfg.tangent_iters = 1;
        let (out, steps) = tangent_space_steps(&g, &z, &s0, &cfg).unwrap();
        assert_eq!(steps, 1);
        let w = g.gradient(&sphere::exp(z.coords(), &s0.coords));
        let d = sphere::exp_pullback_gradient(z.coords(), &s0.coords, &w);
        let s1: Vec<f64> = s0.coords.iter().zip(&d).map(|(a, b)| a - 0.1 * b).collect();
        assert_eq!(out.coords(), sphere::exp(z.coords(), &sphere::project(z.coords(), &s1)).as_slice());
    }

    #[test]
    fn tangent_samples_lie_in_the_ball() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let z = ManifoldPoint::on_sphere(&[1.0, -2.0, 0.5, 3.0, 1.0]).unwrap();
        for _ in 0..200 {
            let s = tangent_ball_sample(&mut rng, z.coords(), 0.3);
            assert!(norm2(&s) <= 0.3 + 1e-15);
            assert!(dot(&s, z.coords()).abs() < 1e-14);
        }
    }

    #[test]
    fn escapes_the_uniform_saddle() {
        let n = 10;
        let f = SquaredNorm::new(n, -1.0);
        let mut rgd = RgdConfig::from_objective(&f).unwrap();
        rgd.grad_tol = 1e-4;
        rgd.max_iters = 3000;
        let cfg = PrgdConfig::new(rgd);
        let sol = had_prgd(&f, &SimplexPoint::uniform(n), &cfg, 11).unwrap();
        assert!(f.value(sol.x.coords()) < -0.5, "{:?}", sol.x);
        assert_eq!(sol.trace.status, RunStatus::Converged);
    }
}
