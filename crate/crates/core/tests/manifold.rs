mod common;

use common::*;
use hadopt::hadamard::Pullback;
use hadopt::linalg::{lanczos_min, min_eig_restricted, DenseMatrix, Subspace};
use hadopt::manifold::{min_hessian_eig, riemannian_gradient, riemannian_hessian_vec, sphere, Geometry, ManifoldPoint};
use hadopt::objective::{LeastSquares, Quadratic};
use hadopt::Objective;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn random_quadratic(seed: u64, n: usize) -> Quadratic {
    let mut r = rng(seed);
    Quadratic::new(DenseMatrix::from_row_major(n, n, gaussian_vec(&mut r, n * n)).unwrap(), gaussian_vec(&mut r, n))
}

proptest! {
    #[test]
    fn exp_map_stays_on_the_sphere(seed in any::<u64>(), n in 2usize..30, scale in 0.0..20.0f64) {
        let mut r = rng(seed);
        let z = unit_vec(&mut r, n);
        let v: Vec<f64> = sphere::project(&z, &gaussian_vec(&mut r, n)).into_iter().map(|x| x * scale).collect();
        let y = sphere::exp(&z, &v);
        prop_assert!((norm(&y) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn tangent_projection_is_idempotent_and_orthogonal(seed in any::<u64>(), n in 2usize..30) {
        let mut r = rng(seed);
        let z = unit_vec(&mut r, n);
        let w = gaussian_vec(&mut r, n);
        let p = sphere::project(&z, &w);
        let pp = sphere::project(&z, &p);
        prop_assert!(dist(&p, &pp) <= 1e-12 * norm(&w).max(1.0));
        let ip: f64 = p.iter().zip(&z).map(|(a, b)| a * b).sum();
        prop_assert!(ip.abs() <= 1e-12 * norm(&w).max(1.0));
    }
}

#[test]
fn geodesic_velocity_matches_finite_differences() {
    let mut r = rng(21);
    for _ in 0..20 {
        let z = unit_vec(&mut r, 6);
        let v = sphere::project(&z, &gaussian_vec(&mut r, 6));
        let a = r_uniform(&mut r);
        let h = 1e-6;
        let step = |a: f64| sphere::exp(&z, &v.iter().map(|x| a * x).collect::<Vec<_>>());
        let fd: Vec<f64> = step(a + h).iter().zip(step(a - h)).map(|(p, m)| (p - m) / (2.0 * h)).collect();
        assert!(rel_err(&sphere::geodesic_velocity(&z, &v, a), &fd, 1e-8) < 1e-6);
    }
}

fn r_uniform(r: &mut rand_chacha::ChaCha8Rng) -> f64 {
    use rand::Rng;
    r.random_range(0.1..2.0)
}

#[test]
fn exp_pullback_gradient_matches_finite_differences() {
    // gradient of s -> g(exp_z(s)) restricted to the tangent space
    let n = 5;
    let f = random_quadratic(22, n);
    let g = Pullback::new(&f);
    let mut r = rng(23);
    for scale in [0.0, 1e-3, 0.5, 2.0] {
        let z = unit_vec(&mut r, n);
        let s: Vec<f64> = sphere::project(&z, &gaussian_vec(&mut r, n)).into_iter().map(|x| x * scale).collect();
        let w = g.gradient(&sphere::exp(&z, &s));
        let analytic = sphere::exp_pullback_gradient(&z, &s, &w);
        let h = 1e-6;
        // directional derivatives along an orthonormal tangent basis
        let sub = Subspace::orthogonal_to(z.clone());
        let mut fd = vec![0.0; n];
        for b in sub.basis() {
            let plus: Vec<f64> = s.iter().zip(&b).map(|(a, c)| a + h * c).collect();
            let minus: Vec<f64> = s.iter().zip(&b).map(|(a, c)| a - h * c).collect();
            let dd = (g.value(&sphere::exp(&z, &plus)) - g.value(&sphere::exp(&z, &minus))) / (2.0 * h);
            fd.iter_mut().zip(&b).for_each(|(f, c)| *f += dd * c);
        }
        assert!(rel_err(&analytic, &fd, 1e-6) < 1e-6, "scale {scale}");
    }
}

/// Riemannian Hessian on the tangent space, assembled densely from the
/// Euclidean Hessian: `P (H - <grad g, z> I) P` with `P = I - z z^T`.
fn dense_riemannian_hessian<G: Objective>(g: &G, z: &[f64]) -> DMatrix<f64> {
    let n = z.len();
    let h = hessian_matrix(g, z);
    let mu: f64 = g.gradient(z).iter().zip(z).map(|(a, b)| a * b).sum();
    let zv = DMatrix::from_column_slice(n, 1, z);
    let p = DMatrix::identity(n, n) - &zv * zv.transpose();
    &p * (h - DMatrix::identity(n, n) * mu) * &p
}

#[test]
fn riemannian_hessian_matches_dense_construction() {
    let n = 8;
    let f = random_quadratic(24, n);
    let g = Pullback::new(&f);
    let mut r = rng(25);
    let z = ManifoldPoint::on_sphere(&unit_vec(&mut r, n)).unwrap();
    let dense = dense_riemannian_hessian(&g, z.coords());
    for _ in 0..5 {
        let d = z.tangent_project(&gaussian_vec(&mut r, n));
        let hv = riemannian_hessian_vec(&g, &z, &d).unwrap();
        let expect = &dense * nalgebra::DVector::from_column_slice(&d.coords);
        assert!(rel_err(&hv.coords, expect.as_slice(), 1e-10) < 1e-10);
    }
}

#[test]
fn min_hessian_eig_matches_dense_eigendecomposition() {
    for (seed, n) in [(30, 3), (31, 8), (32, 15), (33, 20)] {
        let f = random_quadratic(seed, n);
        let g = Pullback::new(&f);
        let z = unit_vec(&mut rng(seed + 100), n);
        let basis = Subspace::orthogonal_to(z.clone()).basis();
        let expect = restricted_min_eig(&dense_riemannian_hessian(&g, &z), &basis).unwrap();
        let got = min_hessian_eig(&g, &ManifoldPoint::on_sphere(&z).unwrap(), 1e-10).unwrap();
        assert!((got - expect).abs() <= 1e-8 * expect.abs().max(1.0), "n = {n}: {got} vs {expect}");
    }
}

#[test]
fn min_hessian_eig_at_a_constrained_convex_minimizer_is_nonnegative() {
    let mut r = rng(34);
    let n = 10;
    let g0 = DMatrix::from_row_slice(n, n, &gaussian_vec(&mut r, n * n));
    let q = g0.transpose() * &g0 / n as f64 + DMatrix::identity(n, n) * 0.1;
    let c = gaussian_vec(&mut r, n);
    let x = qp_simplex_oracle(&q, &c);
    let f = Quadratic::new(DenseMatrix::from_fn(n, n, |i, j| q[(i, j)]), c);
    let z: Vec<f64> = x.iter().map(|v| v.sqrt()).collect();
    let eig = min_hessian_eig(&Pullback::new(&f), &ManifoldPoint::on_sphere(&z).unwrap(), 1e-10).unwrap();
    assert!(eig >= -1e-8, "{eig}");
}

#[test]
fn lanczos_agrees_with_dense_on_large_restricted_problems() {
    let n = 260;
    let mut r = rng(35);
    let a = DenseMatrix::from_row_major(40, n, gaussian_vec(&mut r, 40 * n)).unwrap();
    let f = LeastSquares::new(a, gaussian_vec(&mut r, 40));
    let x = vec![0.5; n];
    let h = hessian_matrix(&f, &x);
    let shifted = &h - DMatrix::identity(n, n) * 3.0;
    let normal = gaussian_vec(&mut r, n);
    let sub = Subspace { dim: n, support: (0..n).filter(|i| i % 3 != 0).collect(), normal: Some(normal) };
    let expect = restricted_min_eig(&shifted, &sub.basis()).unwrap();
    let op =
        |d: &[f64]| -> Vec<f64> { f.hessian_vec(&x, d).unwrap().iter().zip(d).map(|(a, b)| a - 3.0 * b).collect() };
    let lz = lanczos_min(&sub, op, 1e-10, sub.rank()).unwrap();
    assert!((lz.value - expect).abs() < 1e-7, "{} vs {expect}", lz.value);
    let via = min_eig_restricted(&sub, op, 1e-10, sub.rank()).unwrap().unwrap();
    assert!((via.value - expect).abs() < 1e-7);
}

#[test]
fn ball_geometry_interior_and_boundary() {
    let f = random_quadratic(36, 4);
    let g = Pullback::new(&f);
    let inside = ManifoldPoint::new(Geometry::Ball, vec![0.1, 0.2, 0.0, -0.3]).unwrap();
    assert!(!inside.on_boundary());
    let d = inside.tangent_project(&[1.0, 2.0, 3.0, 4.0]);
    assert_eq!(d.coords, vec![1.0, 2.0, 3.0, 4.0]);
    let far = inside.exp_map(&d);
    assert!(norm(far.coords()) <= 1.0 + 1e-15);
    let w = Geometry::weighted(vec![1.0, 2.0, 0.5, 4.0]).unwrap();
    let zc = vec![0.5, 0.25, 0.5, 0.25];
    let s = w.norm_sq(&zc);
    let zc: Vec<f64> = zc.iter().map(|v| v / s.sqrt()).collect();
    let z = ManifoldPoint::new(w.clone(), zc).unwrap();
    assert!(z.on_boundary());
    let t = z.tangent_project(&[1.0, -1.0, 0.3, 0.2]);
    let normal = w.normal(z.coords());
    let ip: f64 = t.coords.iter().zip(&normal).map(|(a, b)| a * b).sum();
    assert!(ip.abs() < 1e-14);
    let hv = riemannian_hessian_vec(&g, &z, &t).unwrap();
    let ip: f64 = hv.coords.iter().zip(&normal).map(|(a, b)| a * b).sum();
    assert!(ip.abs() < 1e-12);
    assert!(Geometry::weighted(vec![1.0, 0.0]).is_err());
    assert!(ManifoldPoint::new(Geometry::Sphere, vec![1.0, 1.0]).is_err());
}

#[test]
fn riemannian_gradient_vanishes_at_uniform_point_of_symmetric_objective() {
    let n = 9;
    let f = hadopt::objective::SquaredNorm::new(n, -1.0);
    let z = ManifoldPoint::on_sphere(&vec![1.0 / (n as f64).sqrt(); n]).unwrap();
    assert!(riemannian_gradient(&Pullback::new(&f), &z).norm() < 1e-15);
}
