//! Small dense linear algebra: row-major matrices, a cyclic Jacobi
//! eigensolver, Householder complements and a Lanczos smallest-eigenvalue
//! routine for matrix-free symmetric operators.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::vector::{dot, norm2};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// `A x`
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// `A^T y`
    pub fn matvec_t(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (i, &yi) in y.iter().enumerate() {
            if yi == 0.0 {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += yi * a;
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Column `j` as an owned vector.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Symmetric part `(A + A^T) / 2` of a square matrix.
    pub fn symmetrized(&self) -> Self {
        assert_eq!(self.rows, self.cols);
        Self::from_fn(self.rows, self.cols, |i, j| 0.5 * (self.get(i, j) + self.get(j, i)))
    }
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns, matching `values`.
    pub vectors: DenseMatrix,
}

impl SymmetricEigen {
    pub fn min(&self) -> Option<(f64, Vec<f64>)> {
        self.values.first().map(|&v| (v, self.vectors.column(0)))
    }
}

/// Cyclic Jacobi rotations. Accurate to a few ulps of the matrix norm, which
/// is all the certification code needs; O(n^3) per sweep.
pub fn symmetric_eigen(m: &DenseMatrix) -> SymmetricEigen {
    assert_eq!(m.rows, m.cols, "symmetric_eigen needs a square matrix");
    let n = m.rows;
    let mut a = m.symmetrized();
    let mut v = DenseMatrix::identity(n);
    let frob = libm::sqrt(a.data.iter().map(|x| x * x).sum::<f64>()).max(f64::MIN_POSITIVE);

    for _sweep in 0..60 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a.get(i, j) * a.get(i, j);
            }
        }
        if libm::sqrt(off) <= f64::EPSILON * frob {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).total_cmp(&a.get(j, j)));
    let values = order.iter().map(|&i| a.get(i, i)).collect();
    let vectors = DenseMatrix::from_fn(n, n, |r, c| v.get(r, order[c]));
    SymmetricEigen { values, vectors }
}

/// Orthonormal basis (as columns of a `k x (k-1)` matrix) of the orthogonal
/// complement of a nonzero `w` in `R^k`, built from a Householder reflector.
pub fn householder_complement(w: &[f64]) -> DenseMatrix {
    let k = w.len();
    if k <= 1 {
        return DenseMatrix::zeros(k, 0);
    }
    let wn = norm2(w);
    if wn == 0.0 {
        return DenseMatrix::from_fn(k, k, |i, j| if i == j { 1.0 } else { 0.0 });
    }
    let sign = if w[0] >= 0.0 { 1.0 } else { -1.0 };
    let mut v = w.to_vec();
    v[0] += sign * wn;
    let vv = dot(&v, &v);
    // Columns 1..k of H = I - 2 v v^T / (v^T v); column 0 is parallel to w.
    DenseMatrix::from_fn(k, k - 1, |i, j| {
        let col = j + 1;
        let id = if i == col { 1.0 } else { 0.0 };
        id - 2.0 * v[i] * v[col] / vv
    })
}

/// Largest eigenvalue of `A^T A` (the squared spectral norm of `A`) by power
/// iteration, stopped at relative change `rel_tol`.
pub fn spectral_norm_sq(a: &DenseMatrix, rel_tol: f64, max_iter: usize) -> f64 {
    let n = a.cols();
    if n == 0 || a.rows() == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut lambda = 0.0;
    for _ in 0..max_iter {
        let w = a.matvec_t(&a.matvec(&v));
        let next = norm2(&w);
        if next == 0.0 {
            return 0.0;
        }
        v = w.into_iter().map(|x| x / next).collect();
        let done = (next - lambda).abs() <= rel_tol * next;
        lambda = next;
        if done {
            break;
        }
    }
    lambda
}

/// A linear subspace of `R^n`: vectors supported on `support` and orthogonal
/// to `normal` (when given). `normal` is a full-length vector; only its
/// entries on the support matter.
#[derive(Debug, Clone)]
pub struct Subspace {
    pub dim: usize,
    pub support: Vec<usize>,
    pub normal: Option<Vec<f64>>,
}

impl Subspace {
    pub fn full(n: usize) -> Self {
        Self { dim: n, support: (0..n).collect(), normal: None }
    }

    pub fn orthogonal_to(normal: Vec<f64>) -> Self {
        let n = normal.len();
        Self { dim: n, support: (0..n).collect(), normal: Some(normal) }
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for &i in &self.support {
            out[i] = u[i];
        }
        if let Some(w) = &self.normal {
            let ww: f64 = self.support.iter().map(|&i| w[i] * w[i]).sum();
            if ww > 0.0 {
                let uw: f64 = self.support.iter().map(|&i| out[i] * w[i]).sum();
                let c = uw / ww;
                for &i in &self.support {
                    out[i] -= c * w[i];
                }
            }
        }
        out
    }

    /// Orthonormal basis in full coordinates, one vector per entry.
    pub fn basis(&self) -> Vec<Vec<f64>> {
        let k = self.support.len();
        let local = match &self.normal {
            Some(w) => {
                let ws: Vec<f64> = self.support.iter().map(|&i| w[i]).collect();
                if ws.iter().all(|&x| x == 0.0) {
                    DenseMatrix::identity(k)
                } else {
                    householder_complement(&ws)
                }
            }
            None => DenseMatrix::identity(k),
        };
        (0..local.cols())
            .map(|c| {
                let mut v = vec![0.0; self.dim];
                for (r, &i) in self.support.iter().enumerate() {
                    v[i] = local.get(r, c);
                }
                v
            })
            .collect()
    }

    /// Dimension of the subspace.
    pub fn rank(&self) -> usize {
        let k = self.support.len();
        match &self.normal {
            Some(w) if self.support.iter().any(|&i| w[i] != 0.0) => k.saturating_sub(1),
            _ => k,
        }
    }
}

/// Smallest eigenvalue and eigenvector of a symmetric operator restricted to
/// a subspace.
#[derive(Debug, Clone)]
pub struct RestrictedEigen {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Subspaces up to this rank are handled by dense projection + Jacobi.
pub const DENSE_LIMIT: usize = 200;

/// `min { u^T M u : u in S, |u| = 1 }` for a symmetric operator `M` given as
/// a matrix-vector closure. Dense for small subspaces, Lanczos above
/// [`DENSE_LIMIT`]. Returns `None` for a zero-dimensional subspace.
pub fn min_eig_restricted(
    sub: &Subspace,
    mut op: impl FnMut(&[f64]) -> Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<Option<RestrictedEigen>> {
    let rank = sub.rank();
    if rank == 0 {
        return Ok(None);
    }
    if rank <= DENSE_LIMIT {
        let basis = sub.basis();
        let images: Vec<Vec<f64>> = basis.iter().map(|b| op(b)).collect();
        let k = basis.len();
        let proj = DenseMatrix::from_fn(k, k, |i, j| dot(&basis[i], &images[j]));
        let eig = symmetric_eigen(&proj);
        let (value, local) = eig.min().expect("nonempty");
        let mut vector = vec![0.0; sub.dim];
        for (c, b) in basis.iter().enumerate() {
            for (v, x) in vector.iter_mut().zip(b) {
                *v += local[c] * x;
            }
        }
        return Ok(Some(RestrictedEigen { value, vector }));
    }
    lanczos_min(sub, |u| sub.project(&op(u)), tol, max_iter.min(rank)).map(Some)
}

/// Lanczos with full reorthogonalisation. `op` must map the subspace into
/// itself. Converges when the Ritz residual of the smallest Ritz pair drops
/// below `tol`.
pub fn lanczos_min(
    sub: &Subspace,
    mut op: impl FnMut(&[f64]) -> Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<RestrictedEigen> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2c05);
    let start: Vec<f64> = (0..sub.dim).map(|_| rng.random::<f64>() - 0.5).collect();
    let mut q = sub.project(&start);
    let nq = norm2(&q);
    if nq == 0.0 {
        return Err(Error::InvalidArgument("empty subspace"));
    }
    q.iter_mut().for_each(|x| *x /= nq);

    let max_iter = max_iter.max(1);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut last = None;

    for step in 0..max_iter {
        let mut w = op(&q);
        let alpha = dot(&q, &w);
        basis.push(q.clone());
        alphas.push(alpha);
        // Full reorthogonalisation, twice for stability.
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let beta = norm2(&w);

        let k = alphas.len();
        let check = step + 1 == max_iter || beta <= 1e-14 || k.is_multiple_of(5) || k < 5;
        if check {
            let (value, s) = tridiagonal_min(&alphas, &betas);
            let residual = (beta * s[k - 1]).abs();
            let mut vector = vec![0.0; sub.dim];
            for (c, b) in basis.iter().enumerate() {
                vector.iter_mut().zip(b).for_each(|(v, x)| *v += s[c] * x);
            }
            let done = residual <= tol || beta <= 1e-14 || k >= sub.rank();
            last = Some(RestrictedEigen { value, vector });
            if done {
                return Ok(last.unwrap());
            }
        }
        if beta <= 1e-14 {
            break;
        }
        betas.push(beta);
        q = w.into_iter().map(|x| x / beta).collect();
    }
    match last {
        Some(_) if basis.len() >= sub.rank() => Ok(last.unwrap()),
        _ => Err(Error::NonConvergence { iterations: max_iter }),
    }
}

/// Smallest eigenpair of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off` (`off.len() + 1 == diag.len()`): Sturm
/// bisection for the value, inverse iteration for the unit vector.
pub fn tridiagonal_min(diag: &[f64], off: &[f64]) -> (f64, Vec<f64>) {
    let k = diag.len();
    debug_assert_eq!(off.len() + 1, k);
    let radius = |i: usize| {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < k { off[i].abs() } else { 0.0 };
        left + right
    };
    let mut lo = (0..k).map(|i| diag[i] - radius(i)).fold(f64::INFINITY, f64::min);
    let mut hi = (0..k).map(|i| diag[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max);
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * scale;
    // number of eigenvalues strictly below x
    let below = |x: f64| {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..k {
            let b2 = if i > 0 { off[i - 1] * off[i - 1] } else { 0.0 };
            d = diag[i] - x - if i > 0 { b2 / d } else { 0.0 };
            if d == 0.0 {
                d = -tiny;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 2.0 * f64::EPSILON * scale || mid <= lo || mid >= hi {
            break;
        }
        if below(mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let value = 0.5 * (lo + hi);

    // Inverse iteration on T - value I via Thomas elimination with pivots
    // nudged away from zero.
    let shift = value - 4.0 * tiny;
    let mut x = vec![1.0; k];
    for _ in 0..3 {
        let mut c = vec![0.0; k];
        let mut y = x.clone();
        let mut piv = diag[0] - shift;
        for i in 0..k {
            if i > 0 {
                piv = diag[i] - shift - off[i - 1] * c[i - 1];
                y[i] -= off[i - 1] * y[i - 1];
            }
            if piv.abs() < tiny {
                piv = tiny;
            }
            if i + 1 < k {
                c[i] = off[i] / piv;
            }
            y[i] /= piv;
        }
        for i in (0..k.saturating_sub(1)).rev() {
            y[i] -= c[i] * y[i + 1];
        }
        let n = norm2(&y);
        if !(n > 0.0) || !n.is_finite() {
            break;
        }
        x = y.into_iter().map(|v| v / n).collect();
    }
    let n = norm2(&x);
    (value, x.into_iter().map(|v| v / n).collect())
}
