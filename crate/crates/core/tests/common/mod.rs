//! Independent oracles shared by the integration tests. Nothing here calls
//! into the code under test except for objective evaluation.
#![allow(dead_code)]

use hadopt::linalg::DenseMatrix;
use hadopt::Objective;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn unit_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v = gaussian_vec(rng, n);
    let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / s).collect()
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Central differences of `f` along each coordinate.
pub fn fd_gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let mut p = x.to_vec();
            let mut m = x.to_vec();
            p[i] += h;
            m[i] -= h;
            (f(&p) - f(&m)) / (2.0 * h)
        })
        .collect()
}

/// Central difference of a gradient map along `d`.
pub fn fd_directional(grad: &dyn Fn(&[f64]) -> Vec<f64>, x: &[f64], d: &[f64], h: f64) -> Vec<f64> {
    let p: Vec<f64> = x.iter().zip(d).map(|(a, b)| a + h * b).collect();
    let m: Vec<f64> = x.iter().zip(d).map(|(a, b)| a - h * b).collect();
    grad(&p).iter().zip(grad(&m)).map(|(a, b)| (a - b) / (2.0 * h)).collect()
}

/// `|a - b| / max(|b|, floor)`
pub fn rel_err(a: &[f64], b: &[f64], floor: f64) -> f64 {
    dist(a, b) / norm(b).max(floor)
}

/// Euclidean projection onto the simplex by enumerating supports: the
/// projection is the unique support `S` with `x_S = y_S - tau > 0` and
/// `y_i <= tau` off `S`. Exponential in `n`.
pub fn projection_oracle(y: &[f64]) -> Vec<f64> {
    let n = y.len();
    assert!(n <= 16);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let tau = (support.iter().map(|&i| y[i]).sum::<f64>() - 1.0) / support.len() as f64;
        let mut x = vec![0.0; n];
        for &i in &support {
            x[i] = (y[i] - tau).max(0.0);
        }
        let s: f64 = x.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            continue;
        }
        let d = dist(&x, y);
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, x));
        }
    }
    best.expect("some support is feasible").1
}

pub fn to_nalgebra(m: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j))
}

/// Minimizer of `x^T Q x / 2 + c^T x` over the simplex for positive
/// definite `Q`, by trying every support and solving its KKT system.
pub fn qp_simplex_oracle(q: &DMatrix<f64>, c: &[f64]) -> Vec<f64> {
    let n = c.len();
    assert!(n <= 12);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let k = s.len();
        // [Q_SS 1; 1^T 0] [x_S; -lambda] = [-c_S; 1]
        let mut m = DMatrix::zeros(k + 1, k + 1);
        let mut rhs = DVector::zeros(k + 1);
        for (a, &i) in s.iter().enumerate() {
            for (b, &j) in s.iter().enumerate() {
                m[(a, b)] = q[(i, j)];
            }
            m[(a, k)] = 1.0;
            m[(k, a)] = 1.0;
            rhs[a] = -c[i];
        }
        rhs[k] = 1.0;
        let Some(sol) = m.lu().solve(&rhs) else { continue };
        if (0..k).any(|a| sol[a] < -1e-12) {
            continue;
        }
        let mut x = vec![0.0; n];
        for (a, &i) in s.iter().enumerate() {
            x[i] = sol[a].max(0.0);
        }
        let total: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= total);
        let xv = DVector::from_column_slice(&x);
        let val = 0.5 * xv.dot(&(q * &xv)) + c.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
        if best.as_ref().is_none_or(|(bv, _)| val < *bv) {
            best = Some((val, x));
        }
    }
    best.expect("some support is feasible").1
}

/// Smallest eigenvalue of the symmetric `m` restricted to the span of the
/// orthonormalized `basis` columns, by dense eigendecomposition.
pub fn restricted_min_eig(m: &DMatrix<f64>, basis: &[Vec<f64>]) -> Option<f64> {
    if basis.is_empty() {
        return None;
    }
    let n = m.nrows();
    let b = DMatrix::from_fn(n, basis.len(), |i, j| basis[j][i]);
    let q = b.qr().q();
    let r = q.transpose() * m * &q;
    let eig = SymmetricEigen::new(r);
    eig.eigenvalues.iter().copied().reduce(f64::min)
}

/// Dense Hessian of `f` at `x` assembled from Hessian-vector products.
pub fn hessian_matrix<F: Objective + ?Sized>(f: &F, x: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    let mut h = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = f.hessian_vec(x, &e).expect("hessian available");
        for i in 0..n {
            h[(i, j)] = col[i];
        }
    }
    (&h + h.transpose()) * 0.5
}

/// `min |A x - b|^2 + mu |x|_1` by cyclic coordinate descent.
pub fn lasso_cd(a: &DMatrix<f64>, b: &[f64], mu: f64, sweeps: usize) -> Vec<f64> {
    let (m, n) = a.shape();
    let mut x = vec![0.0; n];
    let mut r: Vec<f64> = b.to_vec();
    let col_sq: Vec<f64> = (0..n).map(|j| (0..m).map(|i| a[(i, j)] * a[(i, j)]).sum()).collect();
    for _ in 0..sweeps {
        let mut change = 0.0_f64;
        for j in 0..n {
            let rho: f64 = (0..m).map(|i| a[(i, j)] * r[i]).sum::<f64>() + col_sq[j] * x[j];
            // minimize col_sq t^2 - 2 rho t + mu |t|
            let t = if rho > mu / 2.0 {
                (rho - mu / 2.0) / col_sq[j]
            } else if rho < -mu / 2.0 {
                (rho + mu / 2.0) / col_sq[j]
            } else {
                0.0
            };
            let delta = t - x[j];
            if delta != 0.0 {
                for i in 0..m {
                    r[i] -= a[(i, j)] * delta;
                }
                x[j] = t;
            }
            change = change.max(delta.abs());
        }
        if change < 1e-15 {
            break;
        }
    }
    x
}

/// Minimizer of `|A x - b|^2` over the l1 ball via coordinate descent on
/// the penalized problem and bisection on the penalty until `|x|_1 = 1`.
/// Assumes the unconstrained least-squares solution lies outside the ball.
pub fn l1_ball_oracle(a: &DMatrix<f64>, b: &[f64]) -> Vec<f64> {
    let l1 = |x: &[f64]| x.iter().map(|v| v.abs()).sum::<f64>();
    let (mut lo, mut hi) = (0.0, 1.0);
    while l1(&lasso_cd(a, b, hi, 100_000)) > 1.0 {
        hi *= 2.0;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if l1(&lasso_cd(a, b, mid, 100_000)) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lasso_cd(a, b, hi, 100_000)
}
