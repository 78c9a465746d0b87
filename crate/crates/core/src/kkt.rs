//! Numerical first- and second-order KKT certification.
//!
//! The original problems live on `x`: the probability simplex, the unit
//! simplex `{x >= 0, sum x <= 1}`, the weighted simplex `{x >= 0, a^T x = 1}`
//! and the l1 ball. Their parametrized counterparts live on `z`: the sphere,
//! the unit ball, the weighted sphere `{sum a_i z_i^2 = 1}` and the ball in
//! `R^{2n}` for `x = z_u^2 - z_v^2`.
//!
//! All checks share one pattern: recover the multiplier of the norm or sum
//! constraint by least squares over the support, measure the stationarity,
//! sign and complementarity residuals, then compute the smallest eigenvalue
//! of the Lagrangian Hessian on the critical subspace. Every tolerance is an
//! engineering threshold; exact-zero conditions are never tested exactly.
//!
//! Weights equal to one reproduce the unweighted checks bit for bit: the
//! unweighted entry points run the weighted code with `a = 1`, and every
//! weight enters only through multiplications by `a_i`.

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::hadamard::{hadamard_square, DoublePullback, Pullback};
use crate::linalg::{min_eig_restricted, Subspace};
use crate::manifold::{min_hessian_eig, Geometry, ManifoldPoint};
use crate::objective::Objective;
use crate::vector::{dot, norm1, norm2};

/// Entries with `|x_i| > SUPPORT_TOL` form the support. Inequality
/// constraints with slack at most `SUPPORT_TOL` count as active.
pub const SUPPORT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ProblemKind {
    Simplex,
    UnitSimplex,
    WeightedSimplex,
    L1Ball,
    Sphere,
    Ball,
    WeightedSphere,
    DoubleBall,
}

impl ProblemKind {
    pub fn is_parametrized(self) -> bool {
        matches!(self, ProblemKind::Sphere | ProblemKind::Ball | ProblemKind::WeightedSphere | ProblemKind::DoubleBall)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Verdict {
    /// Some first-order condition fails by more than the tolerance.
    NotStationary,
    /// First-order conditions hold; curvature was not evaluated because the
    /// objective has no Hessian-vector product.
    FirstOrderKkt,
    /// First-order KKT with a direction of curvature below `-tol` in the
    /// critical subspace.
    StrictSaddle,
    /// First-order KKT with curvature at least `-tol` on the critical
    /// subspace.
    SecondOrderKkt,
    /// Second-order KKT with curvature above `tol` and strict
    /// complementarity.
    NonDegenerate,
}

impl Verdict {
    pub fn is_first_order(self) -> bool {
        self != Verdict::NotStationary
    }

    pub fn is_second_order(self) -> bool {
        matches!(self, Verdict::SecondOrderKkt | Verdict::NonDegenerate)
    }
}

/// Residuals and verdict of one KKT check.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KktReport {
    pub kind: ProblemKind,
    /// Violation of the feasible set (0 when feasible).
    pub feasibility: f64,
    /// Size of the gradient part the constraint multiplier cannot explain:
    /// `max_{i in S} |beta_i|` for original problems,
    /// `|grad f(x) * z - lambda a * z|` for parametrized ones.
    pub stationarity: f64,
    /// Violation of the multiplier sign conditions.
    pub dual_infeasibility: f64,
    /// Multiplier of the sum / norm constraint.
    pub multiplier: f64,
    /// `grad f(x) - lambda a` for original problems.
    pub beta: Option<Vec<f64>>,
    pub complementarity: f64,
    pub constraint_active: bool,
    pub support: Vec<usize>,
    /// Dimension of the subspace on which curvature is tested.
    pub critical_dim: usize,
    /// Smallest Lagrangian-Hessian eigenvalue on the critical subspace;
    /// `None` without a Hessian or for a zero-dimensional subspace.
    pub min_curvature: Option<f64>,
    /// Unit eigenvector for `min_curvature` when it is below `-tol`.
    pub curvature_direction: Option<Vec<f64>>,
    pub strict_complementarity: bool,
    pub verdict: Verdict,
    pub tol: f64,
    pub support_tol: f64,
}

/// Original problem over `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum OriginalProblem {
    Simplex,
    UnitSimplex,
    WeightedSimplex(Arc<[f64]>),
    L1Ball,
}

impl OriginalProblem {
    /// The problem whose parametrization lives on `geometry`.
    pub fn for_geometry(geometry: &Geometry) -> Self {
        match geometry {
            Geometry::Sphere => OriginalProblem::Simplex,
            Geometry::Ball => OriginalProblem::UnitSimplex,
            Geometry::WeightedBall(a) => OriginalProblem::WeightedSimplex(a.clone()),
            Geometry::DoubleSphere => OriginalProblem::L1Ball,
        }
    }
}

/// Image of a parametrized point: `z * z`, or `z_u^2 - z_v^2` for the
/// stacked double parametrization.
pub fn original_point(geometry: &Geometry, z: &[f64]) -> Vec<f64> {
    match geometry {
        Geometry::DoubleSphere => {
            let n = z.len() / 2;
            crate::hadamard::double_hadamard(&z[..n], &z[n..])
        }
        _ => hadamard_square(z),
    }
}

/// `(z_u, z_v) = (sqrt(max(x, 0)), sqrt(max(-x, 0)))`, the representative
/// with `z_u * z_v = 0`.
pub fn l1_representative(x: &[f64]) -> Vec<f64> {
    let mut z: Vec<f64> = x.iter().map(|&v| libm::sqrt(v.max(0.0))).collect();
    z.extend(x.iter().map(|&v| libm::sqrt((-v).max(0.0))));
    z
}

/// First- and second-order check on the probability simplex.
pub fn kkt_check_simplex<F: Objective + ?Sized>(f: &F, x: &[f64], tol: f64) -> KktReport {
    let ones = vec![1.0; x.len()];
    let mut r = linear_check(f, x, &ones, Constraint::Equality, tol);
    r.kind = ProblemKind::Simplex;
    r
}

/// First- and second-order check on the sphere for `g(z) = f(z * z)`.
pub fn kkt_check_sphere<F: Objective + ?Sized>(f: &F, z: &[f64], tol: f64) -> KktReport {
    let ones = vec![1.0; z.len()];
    let mut r = norm_check(&Pullback::new(f), z, &ones, Constraint::Equality, tol);
    r.kind = ProblemKind::Sphere;
    r
}

/// Check of an original problem at `x`. For the l1 ball `assume_convex`
/// must be set: the conditions used there are only meaningful for convex
/// `f`.
pub fn kkt_check_original<F: Objective + ?Sized>(
    f: &F,
    x: &[f64],
    problem: &OriginalProblem,
    tol: f64,
    assume_convex: bool,
) -> Result<KktReport> {
    if f.dim() != x.len() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: x.len() });
    }
    Ok(match problem {
        OriginalProblem::Simplex => kkt_check_simplex(f, x, tol),
        OriginalProblem::UnitSimplex => {
            let ones = vec![1.0; x.len()];
            let mut r = linear_check(f, x, &ones, Constraint::AtMostOne, tol);
            r.kind = ProblemKind::UnitSimplex;
            r
        }
        OriginalProblem::WeightedSimplex(a) => {
            if a.len() != x.len() {
                return Err(Error::DimensionMismatch { expected: x.len(), found: a.len() });
            }
            let mut r = linear_check(f, x, a, Constraint::Equality, tol);
            r.kind = ProblemKind::WeightedSimplex;
            r
        }
        OriginalProblem::L1Ball => {
            if !assume_convex {
                return Err(Error::NonconvexL1);
            }
            l1_check(f, x, tol)
        }
    })
}

/// Check of the parametrized problem on `geometry` at `z`, where `f` is the
/// objective over `x`. The weighted geometry is treated as the surface
/// `sum a_i z_i^2 = 1`; the ball and the double parametrization as balls
/// with an inequality constraint.
pub fn kkt_check_extended<F: Objective + ?Sized>(
    f: &F,
    z: &[f64],
    geometry: &Geometry,
    tol: f64,
    assume_convex: bool,
) -> Result<KktReport> {
    let n = match geometry {
        Geometry::DoubleSphere => 2 * f.dim(),
        _ => f.dim(),
    };
    if z.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: z.len() });
    }
    let ones = vec![1.0; n];
    Ok(match geometry {
        Geometry::Sphere => kkt_check_sphere(f, z, tol),
        Geometry::Ball => {
            let mut r = norm_check(&Pullback::new(f), z, &ones, Constraint::AtMostOne, tol);
            r.kind = ProblemKind::Ball;
            r
        }
        Geometry::WeightedBall(a) => {
            let mut r = norm_check(&Pullback::new(f), z, a, Constraint::Equality, tol);
            r.kind = ProblemKind::WeightedSphere;
            r
        }
        Geometry::DoubleSphere => {
            if !assume_convex {
                return Err(Error::NonconvexL1);
            }
            let mut r = norm_check(&DoublePullback::new(f), z, &ones, Constraint::AtMostOne, tol);
            r.kind = ProblemKind::DoubleBall;
            r
        }
    })
}

/// `|grad g(z)| <= eps` and `lambda_min(Hess g(z)) >= -sqrt(rho eps)`, the
/// eigenvalue computed to `sqrt(rho eps) / 10`.
pub fn epsilon_sosp_check<G: Objective + ?Sized>(g: &G, z: &ManifoldPoint, eps: f64, rho: f64) -> Result<bool> {
    if !(eps > 0.0 && rho > 0.0) {
        return Err(Error::InvalidArgument("eps and rho must be positive"));
    }
    let grad = crate::manifold::riemannian_gradient(g, z);
    if grad.norm() > eps {
        return Ok(false);
    }
    let threshold = libm::sqrt(rho * eps);
    Ok(min_hessian_eig(g, z, threshold / 10.0)? >= -threshold)
}

/// Both sides of a correspondence check.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Correspondence {
    pub original: KktReport,
    pub parametrized: KktReport,
    /// Number of sign patterns of `z`, other than `z` itself, whose verdict was
    /// compared (0 when the dimension exceeds [`MAX_FLIP_DIM`]).
    pub flips_checked: usize,
}

/// Exhaustive sign-flip checks run up to this many coordinates.
pub const MAX_FLIP_DIM: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum CorrespondenceError {
    Analysis(Error),
    Disagreement { reason: &'static str, original: Box<KktReport>, parametrized: Box<KktReport> },
}

impl From<Error> for CorrespondenceError {
    fn from(e: Error) -> Self {
        CorrespondenceError::Analysis(e)
    }
}

impl fmt::Display for CorrespondenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorrespondenceError::Analysis(e) => write!(f, "{e}"),
            CorrespondenceError::Disagreement { reason, original, parametrized } => write!(
                f,
                "{reason}: original {:?} (stationarity {:e}, curvature {:?}), parametrized {:?} (stationarity {:e}, curvature {:?})",
                original.verdict,
                original.stationarity,
                original.min_curvature,
                parametrized.verdict,
                parametrized.stationarity,
                parametrized.min_curvature
            ),
        }
    }
}

impl core::error::Error for CorrespondenceError {}

/// Runs [`kkt_check_sphere`] at `z` and [`kkt_check_simplex`] at `z * z`
/// and requires: second-order on one side iff on the other, and a strict
/// saddle of the simplex problem maps to a strict saddle of the sphere
/// problem. Up to [`MAX_FLIP_DIM`] coordinates, every sign pattern of `z`
/// must receive the same sphere verdict.
pub fn verify_correspondence<F: Objective + ?Sized>(
    f: &F,
    z: &[f64],
    tol: f64,
) -> core::result::Result<Correspondence, CorrespondenceError> {
    verify_correspondence_on(f, z, &Geometry::Sphere, tol, false)
}

/// [`verify_correspondence`] for any of the parametrized geometries.
pub fn verify_correspondence_on<F: Objective + ?Sized>(
    f: &F,
    z: &[f64],
    geometry: &Geometry,
    tol: f64,
    assume_convex: bool,
) -> core::result::Result<Correspondence, CorrespondenceError> {
    let parametrized = kkt_check_extended(f, z, geometry, tol, assume_convex)?;
    let x = original_point(geometry, z);
    let original = kkt_check_original(f, &x, &OriginalProblem::for_geometry(geometry), tol, assume_convex)?;
    let disagree = |reason, o: &KktReport, p: &KktReport| CorrespondenceError::Disagreement {
        reason,
        original: Box::new(o.clone()),
        parametrized: Box::new(p.clone()),
    };
    if original.verdict.is_second_order() != parametrized.verdict.is_second_order() {
        return Err(disagree("second-order verdicts differ", &original, &parametrized));
    }
    if original.verdict == Verdict::StrictSaddle && parametrized.verdict != Verdict::StrictSaddle {
        return Err(disagree("strict saddle not preserved", &original, &parametrized));
    }
    let mut flips_checked = 0;
    if z.len() <= MAX_FLIP_DIM {
        for mask in 1u32..(1u32 << z.len()) {
            let flipped: Vec<f64> =
                z.iter().enumerate().map(|(i, &v)| if mask >> i & 1 == 1 { -v } else { v }).collect();
            let r = kkt_check_extended(f, &flipped, geometry, tol, assume_convex)?;
            if r.verdict != parametrized.verdict {
                return Err(disagree("sign flip changed the verdict", &original, &r));
            }
            flips_checked += 1;
        }
    }
    Ok(Correspondence { original, parametrized, flips_checked })
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Constraint {
    /// `<a, x> = 1` or `sum a_i z_i^2 = 1`
    Equality,
    /// `<1, x> <= 1` or `|z|^2 <= 1`
    AtMostOne,
}

fn finish_verdict(
    first_order: bool,
    has_hessian: bool,
    critical_dim: usize,
    curvature: Option<f64>,
    strict_complementarity: bool,
    tol: f64,
) -> Verdict {
    if !first_order {
        return Verdict::NotStationary;
    }
    if !has_hessian {
        return Verdict::FirstOrderKkt;
    }
    match curvature {
        Some(c) if c < -tol => Verdict::StrictSaddle,
        Some(c) if c > tol && strict_complementarity => Verdict::NonDegenerate,
        None if critical_dim == 0 && strict_complementarity => Verdict::NonDegenerate,
        _ => Verdict::SecondOrderKkt,
    }
}

struct Curvature {
    value: Option<f64>,
    direction: Option<Vec<f64>>,
}

fn curvature_on(sub: &Subspace, op: impl FnMut(&[f64]) -> Vec<f64>, tol: f64, has_hessian: bool) -> Curvature {
    if !has_hessian {
        return Curvature { value: None, direction: None };
    }
    match min_eig_restricted(sub, op, 0.1 * tol, sub.rank().max(1)) {
        Ok(Some(e)) => {
            let direction = (e.value < -tol).then_some(e.vector);
            Curvature { value: Some(e.value), direction }
        }
        // a Lanczos run that used the whole subspace is exact, so failure
        // here means a zero-dimensional subspace
        _ => Curvature { value: None, direction: None },
    }
}

/// Simplex, unit simplex and weighted simplex on `x`.
fn linear_check<F: Objective + ?Sized>(f: &F, x: &[f64], a: &[f64], kind: Constraint, tol: f64) -> KktReport {
    let n = x.len();
    let grad = f.gradient(x);
    let total: f64 = x.iter().zip(a).map(|(xi, ai)| ai * xi).sum();
    let negativity = x.iter().fold(0.0_f64, |m, &v| m.max(-v));
    let feasibility = match kind {
        Constraint::Equality => negativity.max((total - 1.0).abs()),
        Constraint::AtMostOne => negativity.max(total - 1.0),
    };
    let support: Vec<usize> = (0..n).filter(|&i| x[i] > SUPPORT_TOL).collect();
    let active = match kind {
        Constraint::Equality => true,
        Constraint::AtMostOne => total >= 1.0 - SUPPORT_TOL,
    };
    let lambda = if active && !support.is_empty() {
        let num: f64 = support.iter().map(|&i| a[i] * grad[i]).sum();
        let den: f64 = support.iter().map(|&i| a[i] * a[i]).sum();
        num / den
    } else if active {
        // no support: the least-violating multiplier keeps beta >= 0
        (0..n).map(|i| grad[i] / a[i]).fold(f64::INFINITY, f64::min)
    } else {
        0.0
    };
    let beta: Vec<f64> = grad.iter().zip(a).map(|(g, ai)| g - lambda * ai).collect();
    let on_support = |i: usize| x[i] > SUPPORT_TOL;
    let stationarity = support.iter().fold(0.0_f64, |m, &i| m.max(beta[i].abs()));
    let mut dual_infeasibility = (0..n).filter(|&i| !on_support(i)).fold(0.0_f64, |m, i| m.max(-beta[i]));
    if kind == Constraint::AtMostOne {
        dual_infeasibility = dual_infeasibility.max(lambda);
    }
    let complementarity =
        (0..n).fold(0.0_f64, |m, i| m.max((x[i] * beta[i]).abs())).max((lambda * (total - 1.0)).abs());
    let first_order = feasibility <= tol && stationarity <= tol && dual_infeasibility <= tol && complementarity <= tol;
    let strict_complementarity = (0..n).filter(|&i| !on_support(i)).all(|i| beta[i] > tol)
        && (kind == Constraint::Equality || !active || lambda < -tol);

    let sub = Subspace { dim: n, support: support.clone(), normal: active.then(|| a.to_vec()) };
    let critical_dim = sub.rank();
    let has_hessian = f.has_hessian();
    let curv = curvature_on(&sub, |u| f.hessian_vec(x, u).expect("has_hessian checked"), tol, has_hessian);
    let verdict = finish_verdict(first_order, has_hessian, critical_dim, curv.value, strict_complementarity, tol);
    KktReport {
        kind: ProblemKind::Simplex,
        feasibility,
        stationarity,
        dual_infeasibility,
        multiplier: lambda,
        beta: Some(beta),
        complementarity,
        constraint_active: active,
        support,
        critical_dim,
        min_curvature: curv.value,
        curvature_direction: curv.direction,
        strict_complementarity,
        verdict,
        tol,
        support_tol: SUPPORT_TOL,
    }
}

/// Sphere, ball, weighted sphere and double ball on `z`, for a pullback
/// objective `g` with `grad g = 2 (stationarity vector)`.
fn norm_check<G: Objective + ?Sized>(g: &G, z: &[f64], a: &[f64], kind: Constraint, tol: f64) -> KktReport {
    let n = z.len();
    let half: Vec<f64> = g.gradient(z).into_iter().map(|v| 0.5 * v).collect();
    let az: Vec<f64> = a.iter().zip(z).map(|(ai, zi)| ai * zi).collect();
    let total = dot(&az, z);
    let feasibility = match kind {
        Constraint::Equality => (total - 1.0).abs(),
        Constraint::AtMostOne => (total - 1.0).max(0.0),
    };
    let active = match kind {
        Constraint::Equality => true,
        Constraint::AtMostOne => total >= 1.0 - SUPPORT_TOL,
    };
    let azaz = dot(&az, &az);
    let lambda = if active && azaz > 0.0 { dot(&half, &az) / azaz } else { 0.0 };
    let residual: Vec<f64> = half.iter().zip(&az).map(|(h, v)| h - lambda * v).collect();
    let stationarity = norm2(&residual);
    let dual_infeasibility = if kind == Constraint::AtMostOne { lambda.max(0.0) } else { 0.0 };
    let complementarity = (lambda * (total - 1.0)).abs();
    let first_order = feasibility <= tol && stationarity <= tol && dual_infeasibility <= tol && complementarity <= tol;
    let strict_complementarity = kind == Constraint::Equality || !active || lambda < -tol;
    let support: Vec<usize> = (0..n).filter(|&i| z[i] * z[i] > SUPPORT_TOL).collect();

    let sub = if active { Subspace::orthogonal_to(az.clone()) } else { Subspace::full(n) };
    let critical_dim = sub.rank();
    let has_hessian = g.has_hessian();
    let op = |d: &[f64]| -> Vec<f64> {
        let hd = g.hessian_vec(z, d).expect("has_hessian checked");
        hd.iter().zip(a).zip(d).map(|((h, ai), di)| h - 2.0 * lambda * ai * di).collect()
    };
    let curv = curvature_on(&sub, op, tol, has_hessian);
    let verdict = finish_verdict(first_order, has_hessian, critical_dim, curv.value, strict_complementarity, tol);
    KktReport {
        kind: ProblemKind::Sphere,
        feasibility,
        stationarity,
        dual_infeasibility,
        multiplier: lambda,
        beta: None,
        complementarity,
        constraint_active: active,
        support,
        critical_dim,
        min_curvature: curv.value,
        curvature_direction: curv.direction,
        strict_complementarity,
        verdict,
        tol,
        support_tol: SUPPORT_TOL,
    }
}

/// l1 ball: `grad f(x) in lambda sign(x)`, `lambda <= 0`, complementarity;
/// curvature of `f` on `{u : supp u in S, <sign(x), u> = 0 if active}`.
fn l1_check<F: Objective + ?Sized>(f: &F, x: &[f64], tol: f64) -> KktReport {
    let n = x.len();
    let grad = f.gradient(x);
    let r1 = norm1(x);
    let feasibility = (r1 - 1.0).max(0.0);
    let support: Vec<usize> = (0..n).filter(|&i| x[i].abs() > SUPPORT_TOL).collect();
    let active = r1 >= 1.0 - SUPPORT_TOL;
    let sign: Vec<f64> = x
        .iter()
        .map(|&v| {
            if v > SUPPORT_TOL {
                1.0
            } else if v < -SUPPORT_TOL {
                -1.0
            } else {
                0.0
            }
        })
        .collect();
    let lambda = if !active {
        0.0
    } else if support.is_empty() {
        -grad.iter().fold(0.0_f64, |m, g| m.max(g.abs()))
    } else {
        support.iter().map(|&i| sign[i] * grad[i]).sum::<f64>() / support.len() as f64
    };
    let beta: Vec<f64> = (0..n).map(|i| grad[i] - lambda * sign[i]).collect();
    let stationarity = support.iter().fold(0.0_f64, |m, &i| m.max(beta[i].abs()));
    let off_excess = (0..n).filter(|&i| sign[i] == 0.0).fold(0.0_f64, |m, i| m.max(grad[i].abs() + lambda));
    let dual_infeasibility = off_excess.max(lambda).max(0.0);
    let complementarity = (lambda * (r1 - 1.0)).abs();
    let first_order = feasibility <= tol && stationarity <= tol && dual_infeasibility <= tol && complementarity <= tol;
    let strict_complementarity =
        (0..n).filter(|&i| sign[i] == 0.0).all(|i| grad[i].abs() < -lambda - tol) && (!active || lambda < -tol);
    let sub = Subspace { dim: n, support: support.clone(), normal: active.then(|| sign.clone()) };
    let critical_dim = sub.rank();
    let has_hessian = f.has_hessian();
    let curv = curvature_on(&sub, |u| f.hessian_vec(x, u).expect("has_hessian checked"), tol, has_hessian);
    let verdict = finish_verdict(first_order, has_hessian, critical_dim, curv.value, strict_complementarity, tol);
    KktReport {
        kind: ProblemKind::L1Ball,
        feasibility,
        stationarity,
        dual_infeasibility,
        multiplier: lambda,
        beta: Some(beta),
        complementarity,
        constraint_active: active,
        support,
        critical_dim,
        min_curvature: curv.value,
        curvature_direction: curv.direction,
        strict_complementarity,
        verdict,
        tol,
        support_tol: SUPPORT_TOL,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::SquaredNorm;

    #[test]
    fn uniform_minimum_and_saddle() {
        let n = 5;
        let x = vec![1.0 / n as f64; n];
        let r = kkt_check_simplex(&SquaredNorm::new(n, 1.0), &x, 1e-9);
        assert_eq!(r.verdict, Verdict::NonDegenerate);
        assert!((r.multiplier - 2.0 / n as f64).abs() < 1e-15);
        assert!((r.min_curvature.unwrap() - 2.0).abs() < 1e-12);
        let r = kkt_check_simplex(&SquaredNorm::new(n, -1.0), &x, 1e-9);
        assert_eq!(r.verdict, Verdict::StrictSaddle);
        assert!((r.min_curvature.unwrap() + 2.0).abs() < 1e-12);
        assert!(r.curvature_direction.is_some());
    }

    #[test]
    fn vertex_of_negative_norm_is_a_local_minimum() {
        let n = 4;
        let f = SquaredNorm::new(n, -1.0);
        let x = crate::vector::unit(n, 0);
        let r = kkt_check_simplex(&f, &x, 1e-9);
        assert_eq!(r.critical_dim, 0);
        assert_eq!(r.verdict, Verdict::NonDegenerate);
        let s = kkt_check_sphere(&f, &x, 1e-9);
        assert!(s.verdict.is_second_order());
    }

    #[test]
    fn sphere_check_at_uniform() {
        let n = 6;
        let z = vec![1.0 / libm::sqrt(n as f64); n];
        assert!(kkt_check_sphere(&SquaredNorm::new(n, 1.0), &z, 1e-9).verdict.is_second_order());
        let s = kkt_check_sphere(&SquaredNorm::new(n, -1.0), &z, 1e-9);
        assert_eq!(s.verdict, Verdict::StrictSaddle);
    }

    #[test]
    fn unit_simplex_interior_minimum_has_zero_multiplier() {
        let c = vec![0.1, 0.2, 0.3];
        let f = SquaredNorm::centered(c.clone(), 1.0);
        let r = kkt_check_original(&f, &c, &OriginalProblem::UnitSimplex, 1e-9, false).unwrap();
        assert_eq!(r.multiplier, 0.0);
        assert!(!r.constraint_active);
        assert!(r.verdict.is_second_order());
        let z: Vec<f64> = c.iter().map(|v| libm::sqrt(*v)).collect();
        let p = kkt_check_extended(&f, &z, &Geometry::Ball, 1e-9, false).unwrap();
        assert!(p.verdict.is_second_order());
        assert_eq!(p.critical_dim, 3);
    }

    #[test]
    fn l1_requires_convexity_flag() {
        let f = SquaredNorm::new(2, 1.0);
        assert_eq!(kkt_check_original(&f, &[0.0, 0.0], &OriginalProblem::L1Ball, 1e-9, false), Err(Error::NonconvexL1));
        let r = kkt_check_original(&f, &[0.0, 0.0], &OriginalProblem::L1Ball, 1e-9, true).unwrap();
        assert!(r.verdict.is_second_order());
    }
}
