//! Smooth objectives: value, gradient, optional Hessian-vector product and
//! the constants needed for step-size rules.
//!
//! Implementations must be reentrant: solvers and benchmark workers call them
//! from several threads through shared references.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{spectral_norm_sq, symmetric_eigen, DenseMatrix};
use crate::vector::{dot, norm_inf};

/// A twice continuously differentiable `f: R^n -> R`.
pub trait Objective {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    fn gradient(&self, x: &[f64]) -> Vec<f64>;

    fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        (self.value(x), self.gradient(x))
    }

    /// `H(x) d`, or `None` if the objective carries no second-order oracle.
    fn hessian_vec(&self, _x: &[f64], _d: &[f64]) -> Option<Vec<f64>> {
        None
    }

    fn has_hessian(&self) -> bool {
        false
    }

    /// Lipschitz constant `L` of the gradient, when known.
    fn lipschitz_grad(&self) -> Option<f64> {
        None
    }

    /// `M = max over the simplex of |grad f(x)|_inf`, when known.
    fn grad_inf_bound(&self) -> Option<f64> {
        None
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (**self).gradient(x)
    }
    fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        (**self).value_and_gradient(x)
    }
    fn hessian_vec(&self, x: &[f64], d: &[f64]) -> Option<Vec<f64>> {
        (**self).hessian_vec(x, d)
    }
    fn has_hessian(&self) -> bool {
        (**self).has_hessian()
    }
    fn lipschitz_grad(&self) -> Option<f64> {
        (**self).lipschitz_grad()
    }
    fn grad_inf_bound(&self) -> Option<f64> {
        (**self).grad_inf_bound()
    }
}

impl<T: Objective + ?Sized> Objective for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (**self).gradient(x)
    }
    fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        (**self).value_and_gradient(x)
    }
    fn hessian_vec(&self, x: &[f64], d: &[f64]) -> Option<Vec<f64>> {
        (**self).hessian_vec(x, d)
    }
    fn has_hessian(&self) -> bool {
        (**self).has_hessian()
    }
    fn lipschitz_grad(&self) -> Option<f64> {
        (**self).lipschitz_grad()
    }
    fn grad_inf_bound(&self) -> Option<f64> {
        (**self).grad_inf_bound()
    }
}

/// Dense symmetric Hessian assembled column by column from `hessian_vec`.
pub fn dense_hessian<F: Objective + ?Sized>(f: &F, x: &[f64]) -> Option<DenseMatrix> {
    let n = f.dim();
    let mut h = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let col = f.hessian_vec(x, &crate::vector::unit(n, j))?;
        for (i, v) in col.into_iter().enumerate() {
            h.set(i, j, v);
        }
    }
    Some(h.symmetrized())
}

type ValueFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradFn = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type HessVecFn = Box<dyn Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync>;

/// Objective assembled from closures.
pub struct FnObjective {
    dim: usize,
    value: ValueFn,
    gradient: GradFn,
    hessian_vec: Option<HessVecFn>,
    lipschitz: Option<f64>,
    grad_inf: Option<f64>,
}

impl FnObjective {
    pub fn new(
        dim: usize,
        value: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            value: Box::new(value),
            gradient: Box::new(gradient),
            hessian_vec: None,
            lipschitz: None,
            grad_inf: None,
        }
    }

    pub fn with_hessian_vec(mut self, hv: impl Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.hessian_vec = Some(Box::new(hv));
        self
    }

    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.lipschitz = Some(l);
        self
    }

    pub fn with_grad_inf_bound(mut self, m: f64) -> Self {
        self.grad_inf = Some(m);
        self
    }
}

impl Objective for FnObjective {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (self.gradient)(x)
    }
    fn hessian_vec(&self, x: &[f64], d: &[f64]) -> Option<Vec<f64>> {
        self.hessian_vec.as_ref().map(|h| h(x, d))
    }
    fn has_hessian(&self) -> bool {
        self.hessian_vec.is_some()
    }
    fn lipschitz_grad(&self) -> Option<f64> {
        self.lipschitz
    }
    fn grad_inf_bound(&self) -> Option<f64> {
        self.grad_inf
    }
}

/// `f(x) = c^T x`.
#[derive(Debug, Clone)]
pub struct Linear {
    pub c: Vec<f64>,
}

impl Linear {
    pub fn new(c: Vec<f64>) -> Self {
        Self { c }
    }
}

impl Objective for Linear {
    fn dim(&self) -> usize {
        self.c.len()
    }
    fn value(&self, x: &[f64]) -> f64 {
        dot(&self.c, x)
    }
    fn gradient(&self, _x: &[f64]) -> Vec<f64> {
        self.c.clone()
    }
    fn hessian_vec(&self, _x: &[f64], d: &[f64]) -> Option<Vec<f64>> {
        Some(vec![0.0; d.len()])
    }
    fn has_hessian(&self) -> bool {
        true
    }
    fn lipschitz_grad(&self) -> Option<f64> {
        Some(0.0)
    }
    fn grad_inf_bound(&self) -> Option<f64> {
        Some(norm_inf(&self.c))
    }
}

/// `f(x) = scale * |x - center|^2`; `scale = -1` with no center is the
/// strict-saddle test function `-|x|^2`.
#[derive(Debug, Clone)]
pub struct SquaredNorm {
    pub dim: usize,
    pub scale: f64,
    pub center: Option<Vec<f64>>,
}

impl SquaredNorm {
    pub fn new(dim: usize, scale: f64) -> Self {
        Self { dim, scale, center: None }
    }

    pub fn centered(center: Vec<f64>, scale: f64) -> Self {
        Self { dim: center.len(), scale, center: Some(center) }
    }

    fn shifted(&self, x: &[f64]) -> Vec<f64> {
        match &self.center {
            Some(c) => x.iter().zip(c).map(|(a, b)| a - b).collect(),
            None => x.to_vec(),
        }
    }
}

impl Objective for SquaredNorm {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &[f64]) -> f64 {
        let r = self.shifted(x);
        self.scale * dot(&r, &r)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.shifted(x).into_iter().map(|r| 2.0 * self.scale * r).collect()
    }
    fn hessian_vec(&self, _x: &[f64], d: &[f64]) -> Option<Vec<f64>> {
        Some(d.iter().map(|v| 2.0 * self.scale * v).collect())
    }
    fn has_hessian(&self) -> bool {
        true
    }
    fn lipschitz_grad(&self) -> Option<f64> {
        Some(2.0 * self.scale.abs())
    }
    fn grad_inf_bound(&self) -> Option<f64> {
        // |x_i - c_i| over x_i in [0, 1] peaks at an endpoint.
        let worst = match &self.center {
            Some(c) => c.iter().fold(0.0_f64, |m, &ci| m.max(ci.abs()).max((1.0 - ci).abs())),
            None => 1.0,
        };
        Some(2.0 * self.scale.abs() * worst)
    }
}

/// `f(x) = x^T Q x / 2 + c^T x` with symmetric `Q`.
#[derive(Debug, Clone)]
pub struct Quadratic {
    q: DenseMatrix,
    c: Vec<f64>,
    lipschitz: f64,
    grad_inf: f64,
}

impl Quadratic {
    /// `q` is symmetrised.
    pub fn new(q: DenseMatrix, c: Vec<f64>) -> Self {
        let q = q.symmetrized();
        let n = c.len();
        assert_eq!(q.rows(), n, "Q and c disagree in dimension");
        let eig = symmetric_eigen(&q);
        let lipschitz = eig.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        // grad f(e_j) = Q e_j + c, and |.|_inf of an affine map peaks at a vertex
        let mut grad_inf = 0.0_f64;
        for j in 0..n {
            for (i, ci) in c.iter().enumerate() {
                grad_inf = grad_inf.max((q.get(i, j) + ci).abs());
            }
        }
        Self { q, c, lipschitz, grad_inf }
    }

    pub fn q(&self) -> &DenseMatrix {
        &self.q
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }
}

impl Objective for Quadratic {
    fn dim(&self) -> usize {
        self.c.len()
    }
    fn value(&self, x: &[f64]) -> f64 {
        0.5 * dot(x, &self.q.matvec(x)) + dot(&self.c, x)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = self.q.matvec(x);
        g.iter_mut().zip(&self.c).for_each(|(a, b)| *a += b);
        g
    }
    fn hessian_vec(&self, _x: &[f64], d: &[f64]) -> Option<Vec<f64>> {
        Some(self.q.matvec(d))
    }
    fn has_hessian(&self) -> bool {
        true
    }
    fn lipschitz_grad(&self) -> Option<f64> {
        Some(self.lipschitz)
    }
    fn grad_inf_bound(&self) -> Option<f64> {
        Some(self.grad_inf)
    }
}

/// `f(x) = |A x - b|^2`.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    a: DenseMatrix,
    b: Vec<f64>,
    lipschitz: f64,
    grad_inf: Option<f64>,
}

impl LeastSquares {
    /// Computes `L = 2 sigma_max(A)^2` by power iteration.
    pub fn new(a: DenseMatrix, b: Vec<f64>) -> Self {
        assert_eq!(a.rows(), b.len(), "A and b disagree in dimension");
        let lipschitz = 2.0 * spectral_norm_sq(&a, 1e-10, 100_000);
        Self { a, b, lipschitz, grad_inf: None }
    }

    /// Also computes `M`, which costs `O(m n^2)`.
    pub fn with_grad_inf_bound(mut self) -> Self {
        // grad f(x) = 2 A^T (A x - b) is affine, so its inf-norm over the
        // simplex peaks at a vertex: column j of 2 A^T A minus 2 A^T b.
        let atb = self.a.matvec_t(&self.b);
        let n = self.a.cols();
        let mut m = 0.0_f64;
        for j in 0..n {
            let col = self.a.column(j);
            let g = self.a.matvec_t(&col);
            for i in 0..n {
                m = m.max((2.0 * (g[i] - atb[i])).abs());
            }
        }
        self.grad_inf = Some(m);
        self
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    fn residual(&self, x: &[f64]) -> Vec<f64> {
        let mut r = self.a.matvec(x);
        r.iter_mut().zip(&self.b).for_each(|(a, b)| *a -= b);
        r
    }
}

impl Objective for LeastSquares {
    fn dim(&self) -> usize {
        self.a.cols()
    }
    fn value(&self, x: &[f64]) -> f64 {
        let r = self.residual(x);
        dot(&r, &r)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let r = self.residual(x);
        self.a.matvec_t(&r).into_iter().map(|v| 2.0 * v).collect()
    }
    fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let r = self.residual(x);
        let g = self.a.matvec_t(&r).into_iter().map(|v| 2.0 * v).collect();
        (dot(&r, &r), g)
    }
    fn hessian_vec(&self, _x: &[f64], d: &[f64]) -> Option<Vec<f64>> {
        Some(self.a.matvec_t(&self.a.matvec(d)).into_iter().map(|v| 2.0 * v).collect())
    }
    fn has_hessian(&self) -> bool {
        true
    }
    fn lipschitz_grad(&self) -> Option<f64> {
        Some(self.lipschitz)
    }
    fn grad_inf_bound(&self) -> Option<f64> {
        self.grad_inf
    }
}

/// `y -> f(y / a)` for positive weights `a`. Minimizing it over the
/// probability simplex is minimizing `f` over the weighted simplex
/// `{x >= 0, a^T x = 1}` with `x = y / a`.
#[derive(Debug, Clone)]
pub struct Rescaled<F> {
    base: F,
    weights: Vec<f64>,
}

impl<F: Objective> Rescaled<F> {
    pub fn new(base: F, weights: Vec<f64>) -> crate::Result<Self> {
        if weights.len() != base.dim() {
            return Err(crate::Error::DimensionMismatch { expected: base.dim(), found: weights.len() });
        }
        if !weights.iter().all(|&w| w > 0.0 && w.is_finite()) {
            return Err(crate::Error::InvalidArgument("weights must be positive and finite"));
        }
        Ok(Self { base, weights })
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `x = y / a`.
    pub fn to_original(&self, y: &[f64]) -> Vec<f64> {
        y.iter().zip(&self.weights).map(|(v, w)| v / w).collect()
    }

    /// `y = a * x`.
    pub fn from_original(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.weights).map(|(v, w)| v * w).collect()
    }

    fn min_weight(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

impl<F: Objective> Objective for Rescaled<F> {
    fn dim(&self) -> usize {
        self.weights.len()
    }
    fn value(&self, y: &[f64]) -> f64 {
        self.base.value(&self.to_original(y))
    }
    fn gradient(&self, y: &[f64]) -> Vec<f64> {
        let g = self.base.gradient(&self.to_original(y));
        g.iter().zip(&self.weights).map(|(g, w)| g / w).collect()
    }
    fn value_and_gradient(&self, y: &[f64]) -> (f64, Vec<f64>) {
        let (v, g) = self.base.value_and_gradient(&self.to_original(y));
        (v, g.iter().zip(&self.weights).map(|(g, w)| g / w).collect())
    }
    fn hessian_vec(&self, y: &[f64], d: &[f64]) -> Option<Vec<f64>> {
        let h = self.base.hessian_vec(&self.to_original(y), &self.to_original(d))?;
        Some(h.iter().zip(&self.weights).map(|(h, w)| h / w).collect())
    }
    fn has_hessian(&self) -> bool {
        self.base.has_hessian()
    }
    fn lipschitz_grad(&self) -> Option<f64> {
        let w = self.min_weight();
        self.base.lipschitz_grad().map(|l| l / (w * w))
    }
}
