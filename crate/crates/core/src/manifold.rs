//! Geometry of the parametrized feasible sets: the unit sphere, the unit
//! ball, the `diag(a)`-weighted ball and the sphere in `R^{2n}` used by the
//! double parametrization of the l1 ball.
//!
//! Spheres move along great circles through the exponential map. Balls have
//! no geodesic recipe here and use the metric projection retraction
//! `z -> z / max(1, |z|)` (with `|.|_a` for the weighted ball).

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{lanczos_min, Subspace};
use crate::objective::Objective;
use crate::vector::{dot, norm2};

/// Feasibility tolerance for manifold points.
pub const FEASIBILITY_TOL: f64 = 1e-10;
/// Tangent vectors shorter than this leave the exponential map at its base.
pub const ZERO_VELOCITY: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    /// `S_{n-1} = {z : |z| = 1}`
    Sphere,
    /// `{z : |z| <= 1}`
    Ball,
    /// `{z : sum_i a_i z_i^2 <= 1}`, `a > 0`.
    WeightedBall(Arc<[f64]>),
    /// `S_{2n-1}` holding a stacked `(z_u, z_v)`.
    DoubleSphere,
}

impl Geometry {
    pub fn weighted(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|&a| !(a > 0.0)) {
            return Err(Error::InvalidArgument("weights must be strictly positive"));
        }
        Ok(Geometry::WeightedBall(weights.into()))
    }

    fn is_sphere(&self) -> bool {
        matches!(self, Geometry::Sphere | Geometry::DoubleSphere)
    }

    /// Squared (weighted) norm defining the set.
    pub fn norm_sq(&self, z: &[f64]) -> f64 {
        match self {
            Geometry::WeightedBall(a) => z.iter().zip(a.iter()).map(|(v, w)| w * v * v).sum(),
            _ => dot(z, z),
        }
    }

    /// Outward normal of the constraint surface at `z` (gradient of
    /// `norm_sq / 2`).
    pub fn normal(&self, z: &[f64]) -> Vec<f64> {
        match self {
            Geometry::WeightedBall(a) => z.iter().zip(a.iter()).map(|(v, w)| w * v).collect(),
            _ => z.to_vec(),
        }
    }
}

/// A feasible point of a [`Geometry`].
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldPoint {
    geometry: Geometry,
    coords: Vec<f64>,
}

/// A direction at a manifold point. On spheres and ball boundaries it is
/// orthogonal to the normal; in ball interiors any vector is tangent.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub coords: Vec<f64>,
}

impl TangentVector {
    pub fn norm(&self) -> f64 {
        norm2(&self.coords)
    }

    pub fn scaled(&self, s: f64) -> TangentVector {
        TangentVector { coords: self.coords.iter().map(|v| v * s).collect() }
    }
}

impl ManifoldPoint {
    pub fn new(geometry: Geometry, coords: Vec<f64>) -> Result<Self> {
        if let Geometry::WeightedBall(a) = &geometry {
            if a.len() != coords.len() {
                return Err(Error::DimensionMismatch { expected: a.len(), found: coords.len() });
            }
        }
        if matches!(geometry, Geometry::DoubleSphere) && !coords.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument("double sphere needs an even dimension"));
        }
        let r = libm::sqrt(geometry.norm_sq(&coords));
        let residual = if geometry.is_sphere() { (r - 1.0).abs() } else { (r - 1.0).max(0.0) };
        if !(residual <= FEASIBILITY_TOL) {
            return Err(Error::Infeasible { residual });
        }
        Ok(Self { geometry, coords })
    }

    /// Rescales a nonzero vector onto the sphere.
    pub fn on_sphere(coords: &[f64]) -> Result<Self> {
        let r = norm2(coords);
        if r == 0.0 {
            return Err(Error::InvalidArgument("cannot normalise the zero vector"));
        }
        Ok(Self { geometry: Geometry::Sphere, coords: coords.iter().map(|v| v / r).collect() })
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// On a sphere, or on the boundary of a ball (within tolerance).
    pub fn on_boundary(&self) -> bool {
        self.geometry.is_sphere() || (libm::sqrt(self.geometry.norm_sq(&self.coords)) - 1.0).abs() <= FEASIBILITY_TOL
    }

    /// Projection of an ambient vector onto the tangent space.
    pub fn tangent_project(&self, w: &[f64]) -> TangentVector {
        let coords = match &self.geometry {
            Geometry::Sphere | Geometry::DoubleSphere => sphere::project(&self.coords, w),
            _ if !self.on_boundary() => w.to_vec(),
            g => {
                let nrm = g.normal(&self.coords);
                let c = dot(w, &nrm) / dot(&nrm, &nrm);
                w.iter().zip(&nrm).map(|(a, b)| a - c * b).collect()
            }
        };
        TangentVector { coords }
    }

    /// Exponential map on spheres, projection retraction on balls.
    pub fn exp_map(&self, v: &TangentVector) -> ManifoldPoint {
        let coords = match &self.geometry {
            Geometry::Sphere | Geometry::DoubleSphere => sphere::exp(&self.coords, &v.coords),
            g => {
                let y: Vec<f64> = self.coords.iter().zip(&v.coords).map(|(a, b)| a + b).collect();
                let r = libm::sqrt(g.norm_sq(&y));
                if r > 1.0 {
                    y.into_iter().map(|c| c / r).collect()
                } else {
                    y
                }
            }
        };
        ManifoldPoint { geometry: self.geometry.clone(), coords }
    }
}

/// `Proj_z grad g(z)` for the Euclidean gradient of the objective over `z`.
pub fn riemannian_gradient<G: Objective + ?Sized>(g: &G, z: &ManifoldPoint) -> TangentVector {
    z.tangent_project(&g.gradient(z.coords()))
}

/// Riemannian Hessian applied to a tangent direction.
///
/// On spheres this is `Proj_z (Hess g(z) - <grad g(z), z>) Proj_z`. On a ball
/// boundary the Lagrangian form with the weighted normal is used, and in a
/// ball interior the Euclidean Hessian.
pub fn riemannian_hessian_vec<G: Objective + ?Sized>(
    g: &G,
    z: &ManifoldPoint,
    d: &TangentVector,
) -> Result<TangentVector> {
    let zc = z.coords();
    if !z.on_boundary() {
        let hv = g.hessian_vec(zc, &d.coords).ok_or(Error::MissingHessian)?;
        return Ok(TangentVector { coords: hv });
    }
    let pd = z.tangent_project(&d.coords);
    let hv = g.hessian_vec(zc, &pd.coords).ok_or(Error::MissingHessian)?;
    let grad = g.gradient(zc);
    let out: Vec<f64> = match z.geometry() {
        Geometry::WeightedBall(a) => {
            let nrm = z.geometry().normal(zc);
            let mu = dot(&grad, &nrm) / dot(&nrm, &nrm);
            (0..zc.len()).map(|i| hv[i] - mu * a[i] * pd.coords[i]).collect()
        }
        _ => {
            let nrm = z.geometry().normal(zc);
            let mu = dot(&grad, &nrm) / dot(&nrm, &nrm);
            hv.iter().zip(&pd.coords).map(|(h, p)| h - mu * p).collect()
        }
    };
    Ok(z.tangent_project(&out))
}

/// Smallest eigenvalue of the Riemannian Hessian on the tangent space of a
/// sphere point, by matrix-free Lanczos converged to `tol`.
pub fn min_hessian_eig<G: Objective + ?Sized>(g: &G, z: &ManifoldPoint, tol: f64) -> Result<f64> {
    min_hessian_eig_capped(g, z, tol, z.coords().len())
}

/// [`min_hessian_eig`] with an explicit Lanczos iteration cap.
pub fn min_hessian_eig_capped<G: Objective + ?Sized>(
    g: &G,
    z: &ManifoldPoint,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    if !z.geometry().is_sphere() {
        return Err(Error::InvalidArgument("min_hessian_eig needs a sphere point"));
    }
    if !g.has_hessian() {
        return Err(Error::MissingHessian);
    }
    let zc = z.coords();
    let sub = Subspace::orthogonal_to(zc.to_vec());
    if sub.rank() == 0 {
        return Ok(0.0);
    }
    let grad = g.gradient(zc);
    let mu = dot(&grad, zc);
    let op = |d: &[f64]| -> Vec<f64> {
        let pd = sphere::project(zc, d);
        let hv = g.hessian_vec(zc, &pd).expect("checked has_hessian");
        let w: Vec<f64> = hv.iter().zip(&pd).map(|(h, p)| h - mu * p).collect();
        sphere::project(zc, &w)
    };
    lanczos_min(&sub, op, tol, max_iter).map(|e| e.value)
}

/// Slice-level sphere operations used inside the solvers.
pub mod sphere {
    use alloc::vec::Vec;

    use crate::vector::{dot, norm2};

    use super::ZERO_VELOCITY;

    /// `w - <w, z> z`
    pub fn project(z: &[f64], w: &[f64]) -> Vec<f64> {
        let c = dot(w, z);
        w.iter().zip(z).map(|(a, b)| a - c * b).collect()
    }

    /// `cos|v| z + sin|v| v/|v|`, renormalised.
    pub fn exp(z: &[f64], v: &[f64]) -> Vec<f64> {
        let t = norm2(v);
        if t < ZERO_VELOCITY {
            return z.to_vec();
        }
        let (s, c) = (libm::sin(t), libm::cos(t));
        let y: Vec<f64> = z.iter().zip(v).map(|(a, b)| c * a + s * b / t).collect();
        let r = norm2(&y);
        y.into_iter().map(|e| e / r).collect()
    }

    /// Velocity `d/da exp_z(a v)` of the geodesic at parameter `a`.
    pub fn geodesic_velocity(z: &[f64], v: &[f64], a: f64) -> Vec<f64> {
        let t = norm2(v);
        let (s, c) = (libm::sin(a * t), libm::cos(a * t));
        z.iter().zip(v).map(|(zi, vi)| -s * t * zi + c * vi).collect()
    }

    /// Gradient of `s -> g(exp_z(s))` on the tangent space at `z`, given the
    /// Euclidean gradient `w = grad g(exp_z(s))`. With `t = |s|`, `u = s/t`:
    ///
    /// `u [(cos t - sin t / t) <u, w> - sin t <z, w>] + (sin t / t) Proj_z w`
    pub fn exp_pullback_gradient(z: &[f64], s: &[f64], w: &[f64]) -> Vec<f64> {
        let t = norm2(s);
        let pw = project(z, w);
        if t < ZERO_VELOCITY {
            return pw;
        }
        let (sn, cs) = (libm::sin(t), libm::cos(t));
        let sinc = sn / t;
        let uw = dot(s, w) / t;
        let zw = dot(z, w);
        let coef = (cs - sinc) * uw - sn * zw;
        s.iter().zip(&pw).map(|(si, p)| coef * si / t + sinc * p).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::Pullback;
    use crate::objective::{Linear, SquaredNorm};
    use alloc::vec;
    use core::f64::consts::FRAC_PI_2;

    fn e(n: usize, i: usize) -> Vec<f64> {
        crate::vector::unit(n, i)
    }

    #[test]
    fn projection_examples() {
        let z = ManifoldPoint::new(Geometry::Sphere, e(3, 0)).unwrap();
        assert_eq!(z.tangent_project(&e(3, 0)).coords, vec![0.0; 3]);
        assert_eq!(z.tangent_project(&e(3, 1)).coords, e(3, 1));
    }

    #[test]
    fn exp_examples() {
        let z = ManifoldPoint::new(Geometry::Sphere, e(3, 0)).unwrap();
        let zero = TangentVector { coords: vec![0.0; 3] };
        assert_eq!(z.exp_map(&zero), z);
        let v = TangentVector { coords: vec![0.0, FRAC_PI_2, 0.0] };
        let y = z.exp_map(&v);
        assert!((y.coords()[1] - 1.0).abs() < 1e-15);
        assert!(y.coords()[0].abs() < 1e-15);
    }

    #[test]
    fn rejects_infeasible_points_and_bad_weights() {
        assert!(ManifoldPoint::new(Geometry::Sphere, vec![0.5, 0.5]).is_err());
        assert!(ManifoldPoint::new(Geometry::Ball, vec![0.5, 0.5]).is_ok());
        assert!(ManifoldPoint::new(Geometry::Ball, vec![1.0, 0.5]).is_err());
        assert!(Geometry::weighted(vec![1.0, 0.0]).is_err());
        let w = Geometry::weighted(vec![4.0, 1.0]).unwrap();
        assert!(ManifoldPoint::new(w.clone(), vec![0.5, 0.0]).is_ok());
        assert!(ManifoldPoint::new(w, vec![0.6, 0.0]).is_err());
    }

    #[test]
    fn ball_interior_keeps_direction_and_retracts() {
        let z = ManifoldPoint::new(Geometry::Ball, vec![0.1, 0.2]).unwrap();
        assert_eq!(z.tangent_project(&[3.0, 4.0]).coords, vec![3.0, 4.0]);
        let y = z.exp_map(&TangentVector { coords: vec![2.9, 3.8] });
        assert!((norm2(y.coords()) - 1.0).abs() < 1e-15);
        let b = ManifoldPoint::new(Geometry::Ball, vec![1.0, 0.0]).unwrap();
        assert_eq!(b.tangent_project(&[3.0, 4.0]).coords, vec![0.0, 4.0]);
    }

    #[test]
    fn weighted_boundary_projection_is_a_orthogonal() {
        let a = vec![4.0, 1.0, 2.0];
        let g = Geometry::weighted(a.clone()).unwrap();
        let z = vec![0.3, 0.5, libm::sqrt((1.0 - 4.0 * 0.09 - 0.25) / 2.0)];
        let p = ManifoldPoint::new(g, z.clone()).unwrap();
        let t = p.tangent_project(&[1.0, -2.0, 0.5]);
        let az: Vec<f64> = a.iter().zip(&z).map(|(x, y)| x * y).collect();
        assert!(dot(&t.coords, &az).abs() < 1e-14);
    }

    #[test]
    fn constant_and_simplex_constant_gradients_vanish() {
        let n = 5;
        let z = ManifoldPoint::on_sphere(&[1.0, 2.0, -1.0, 0.5, 3.0]).unwrap();
        // f(x) = 1^T x is constant on the simplex, so grad g vanishes on the sphere
        let g = Pullback::new(Linear::new(vec![1.0; n]));
        assert!(riemannian_gradient(&g, &z).norm() < 1e-14);
        let zero = Pullback::new(Linear::new(vec![0.0; n]));
        let d = z.tangent_project(&[1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(riemannian_hessian_vec(&zero, &z, &d).unwrap().coords, vec![0.0; n]);
        assert!(min_hessian_eig(&g, &z, 1e-10).unwrap().abs() < 1e-10);
    }

    #[test]
    fn strict_saddle_has_negative_curvature() {
        let n = 6;
        let g = Pullback::new(SquaredNorm::new(n, -1.0));
        let z = ManifoldPoint::on_sphere(&vec![1.0; n]).unwrap();
        // analytic: every tangent direction has curvature -8/n
        let lmin = min_hessian_eig(&g, &z, 1e-12).unwrap();
        assert!((lmin + 8.0 / n as f64).abs() < 1e-10, "{lmin}");
    }

    #[test]
    fn exp_pullback_gradient_at_zero_is_projected_gradient() {
        let z = [0.6, 0.8, 0.0];
        let w = [1.0, 2.0, 3.0];
        assert_eq!(sphere::exp_pullback_gradient(&z, &[0.0; 3], &w), sphere::project(&z, &w));
    }
}
