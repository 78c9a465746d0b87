mod common;

use common::*;
use hadopt::hadamard::{
    double_hadamard, hadamard_sqrt, hadamard_square, pullback_gradient, pullback_hessian_vec, transfer_lipschitz,
    DoublePullback, Pullback,
};
use hadopt::linalg::DenseMatrix;
use hadopt::objective::{FnObjective, LeastSquares, Linear, Quadratic};
use hadopt::vector::{mul, norm1};
use hadopt::{Error, Objective};
use proptest::prelude::*;

fn vec_strategy(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, n)
}

proptest! {
    #[test]
    fn ones_is_the_identity(z in vec_strategy(1..30)) {
        prop_assert_eq!(mul(&vec![1.0; z.len()], &z), z);
    }

    #[test]
    fn zero_pattern_transfers(z in vec_strategy(1..30), mask in prop::collection::vec(any::<bool>(), 30)) {
        let d: Vec<f64> = z.iter().zip(&mask).map(|(zi, m)| if *m { 0.0 } else { zi + 1.0 }).collect();
        let zz: Vec<f64> = z.iter().zip(&mask).map(|(zi, m)| if *m { *zi } else { 0.0 }).collect();
        prop_assert!(mul(&d, &mul(&zz, &zz)).iter().all(|v| *v == 0.0));
        prop_assert!(mul(&d, &zz).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn weighted_inner_product_symmetry((z, d) in (1usize..30).prop_flat_map(|n| (vec_strategy(n..n + 1), vec_strategy(n..n + 1)))) {
        let lhs: f64 = d.iter().zip(mul(&z, &d)).map(|(a, b)| a * b).sum();
        let rhs: f64 = z.iter().zip(mul(&d, &d)).map(|(a, b)| a * b).sum();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
    }

    #[test]
    fn product_norm_bound((z, d) in (1usize..30).prop_flat_map(|n| (vec_strategy(n..n + 1), vec_strategy(n..n + 1)))) {
        let zinf = z.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        prop_assert!(norm(&mul(&d, &z)) <= norm(&d) * zinf * (1.0 + 1e-15));
    }

    #[test]
    fn square_sums_to_squared_norm(z in vec_strategy(1..30)) {
        let x = hadamard_square(&z);
        prop_assert!(x.iter().all(|v| *v >= 0.0));
        let s: f64 = x.iter().sum();
        let nz: f64 = z.iter().map(|v| v * v).sum();
        prop_assert!((s - nz).abs() <= 1e-12 * nz.max(1.0));
    }

    #[test]
    fn sphere_maps_into_simplex(seed in any::<u64>(), n in 1usize..40) {
        let z = unit_vec(&mut rng(seed), n);
        let x = hadamard_square(&z);
        prop_assert!((x.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn sqrt_inverts_square(z in vec_strategy(1..30)) {
        let x = hadamard_square(&z);
        let r = hadamard_sqrt(&x).unwrap();
        for (a, b) in r.iter().zip(&z) {
            prop_assert!((a - b.abs()).abs() <= 1e-14 * b.abs().max(1.0));
        }
    }

    #[test]
    fn double_square_stays_in_l1_ball(seed in any::<u64>(), n in 1usize..20) {
        let z = unit_vec(&mut rng(seed), 2 * n);
        let x = double_hadamard(&z[..n], &z[n..]);
        prop_assert!(norm1(&x) <= 1.0 + 1e-12);
    }
}

#[test]
fn sqrt_clamps_roundoff_and_rejects_negatives() {
    assert_eq!(hadamard_sqrt(&[0.25, -1e-13]).unwrap(), vec![0.5, 0.0]);
    assert!(matches!(hadamard_sqrt(&[0.5, -1e-6]), Err(Error::NegativeEntry { index: 1, .. })));
}

#[test]
fn linear_pullback_is_exact() {
    let c = vec![1.0, -2.0, 0.5];
    let f = Linear::new(c.clone());
    let z = [0.3, 0.0, -0.7];
    assert_eq!(pullback_gradient(&f, &z), vec![0.6, 0.0, -0.7]);
    let d = [1.0, 1.0, 1.0];
    assert_eq!(pullback_hessian_vec(&f, &z, &d).unwrap(), vec![2.0, -4.0, 1.0]);
}

/// `sum_i -log(x_i + mu) + |x|^2`: smooth on a neighbourhood of the simplex.
fn log_barrier(n: usize, mu: f64) -> FnObjective {
    FnObjective::new(
        n,
        move |x| x.iter().map(|v| -(v + mu).ln() + v * v).sum(),
        move |x| x.iter().map(|v| -1.0 / (v + mu) + 2.0 * v).collect(),
    )
    .with_hessian_vec(move |x, d| x.iter().zip(d).map(|(v, di)| (1.0 / ((v + mu) * (v + mu)) + 2.0) * di).collect())
}

#[test]
fn pullback_derivatives_match_finite_differences() {
    let mut r = rng(11);
    for n in [4, 6, 12] {
        let a = DenseMatrix::from_row_major(4, n, gaussian_vec(&mut r, 4 * n)).unwrap();
        let ls = LeastSquares::new(a, gaussian_vec(&mut r, 4));
        let q = Quadratic::new(
            DenseMatrix::from_row_major(n, n, gaussian_vec(&mut r, n * n)).unwrap(),
            gaussian_vec(&mut r, n),
        );
        let lb = log_barrier(n, 0.5);
        let objs: [&dyn Objective; 3] = [&ls, &q, &lb];
        for f in objs {
            let z = unit_vec(&mut r, n);
            let d = gaussian_vec(&mut r, n);
            let h = f64::EPSILON.powf(1.0 / 3.0);
            let fd = fd_gradient(&|z: &[f64]| f.value(&hadamard_square(z)), &z, h);
            assert!(rel_err(&pullback_gradient(f, &z), &fd, 1e-8) < 1e-5);
            let fd_h = fd_directional(&|z: &[f64]| pullback_gradient(f, z), &z, &d, h);
            assert!(rel_err(&pullback_hessian_vec(f, &z, &d).unwrap(), &fd_h, 1e-8) < 1e-4);
        }
    }
}

#[test]
fn double_pullback_matches_finite_differences() {
    let mut r = rng(12);
    let n = 5;
    let a = DenseMatrix::from_row_major(3, n, gaussian_vec(&mut r, 3 * n)).unwrap();
    let f = LeastSquares::new(a, gaussian_vec(&mut r, 3));
    let g = DoublePullback::new(&f);
    let z = unit_vec(&mut r, 2 * n);
    let d = gaussian_vec(&mut r, 2 * n);
    assert_eq!(g.value(&z), f.value(&double_hadamard(&z[..n], &z[n..])));
    let h = f64::EPSILON.powf(1.0 / 3.0);
    let fd = fd_gradient(&|z: &[f64]| g.value(z), &z, h);
    assert!(rel_err(&g.gradient(&z), &fd, 1e-8) < 1e-5);
    let fd_h = fd_directional(&|z: &[f64]| g.gradient(z), &z, &d, h);
    assert!(rel_err(&g.hessian_vec(&z, &d).unwrap(), &fd_h, 1e-8) < 1e-4);
}

#[test]
fn hessian_vec_is_symmetric() {
    let mut r = rng(13);
    let n = 7;
    let f = Quadratic::new(
        DenseMatrix::from_row_major(n, n, gaussian_vec(&mut r, n * n)).unwrap(),
        gaussian_vec(&mut r, n),
    );
    let g = Pullback::new(&f);
    for _ in 0..20 {
        let z = gaussian_vec(&mut r, n);
        let u = gaussian_vec(&mut r, n);
        let v = gaussian_vec(&mut r, n);
        let uhv: f64 = u.iter().zip(g.hessian_vec(&z, &v).unwrap()).map(|(a, b)| a * b).sum();
        let vhu: f64 = v.iter().zip(g.hessian_vec(&z, &u).unwrap()).map(|(a, b)| a * b).sum();
        assert!((uhv - vhu).abs() <= 1e-8 * (1.0 + uhv.abs()));
    }
}

#[test]
fn lipschitz_transfer() {
    assert_eq!(transfer_lipschitz(0.0, 0.0).unwrap(), 0.0);
    assert_eq!(transfer_lipschitz(1.0, 0.5).unwrap(), 5.0);
    assert!(transfer_lipschitz(-1.0, 0.0).is_err());
    let mut r = rng(14);
    let a = DenseMatrix::from_row_major(4, 6, gaussian_vec(&mut r, 24)).unwrap();
    let f = LeastSquares::new(a, gaussian_vec(&mut r, 4)).with_grad_inf_bound();
    let g = Pullback::new(&f);
    let bound = g.lipschitz_grad().unwrap();
    assert_eq!(bound, 4.0 * f.lipschitz_grad().unwrap() + 2.0 * f.grad_inf_bound().unwrap());
    for _ in 0..2000 {
        let z1 = unit_vec(&mut r, 6);
        let z2 = unit_vec(&mut r, 6);
        assert!(dist(&g.gradient(&z1), &g.gradient(&z2)) <= bound * dist(&z1, &z2));
    }
}

#[test]
fn grad_inf_bound_is_attained_at_a_vertex() {
    // brute force the max of |grad f|_inf over a fine grid on the 2-simplex
    let mut r = rng(15);
    let a = DenseMatrix::from_row_major(2, 3, gaussian_vec(&mut r, 6)).unwrap();
    let f = LeastSquares::new(a, gaussian_vec(&mut r, 2)).with_grad_inf_bound();
    let mut best = 0.0_f64;
    let k = 60;
    for i in 0..=k {
        for j in 0..=(k - i) {
            let x = [i as f64 / k as f64, j as f64 / k as f64, (k - i - j) as f64 / k as f64];
            best = best.max(f.gradient(&x).iter().fold(0.0_f64, |m, v| m.max(v.abs())));
        }
    }
    assert!((best - f.grad_inf_bound().unwrap()).abs() <= 1e-12 * best);
}
