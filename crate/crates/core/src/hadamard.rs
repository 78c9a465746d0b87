//! The Hadamard parametrization `x = z * z` and the pullback objectives
//! `g(z) = f(z * z)` and `g(z_u, z_v) = f(z_u * z_u - z_v * z_v)`.
//!
//! With `x = z * z` the chain rule gives
//!
//! ```text
//! grad g(z)   = 2 grad f(x) * z
//! Hess g(z) d = 2 grad f(x) * d + 4 z * (Hess f(x) (z * d))
//! ```
//!
//! and if `grad f` is `L`-Lipschitz with `|grad f|_inf <= M` on the simplex,
//! `grad g` is `(4L + 2M)`-Lipschitz on the unit sphere. `M` is taken in the
//! inf-norm, which is what the bound `|d * z| <= |d| |z|_inf` needs.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::objective::Objective;

/// Entries of `x` in `[-HADAMARD_SQRT_CLAMP, 0)` are treated as zero by
/// [`hadamard_sqrt`]; anything more negative is rejected.
pub const HADAMARD_SQRT_CLAMP: f64 = 1e-12;

/// `[x]_i = [z]_i^2`
pub fn hadamard_square(z: &[f64]) -> Vec<f64> {
    z.iter().map(|v| v * v).collect()
}

/// Entrywise nonnegative square root. Of the `2^n` preimages of `x` this is
/// the one in the closed positive orthant.
pub fn hadamard_sqrt(x: &[f64]) -> Result<Vec<f64>> {
    x.iter()
        .enumerate()
        .map(|(index, &value)| {
            if value >= 0.0 {
                Ok(libm::sqrt(value))
            } else if value >= -HADAMARD_SQRT_CLAMP {
                Ok(0.0)
            } else {
                Err(Error::NegativeEntry { index, value })
            }
        })
        .collect()
}

/// `z_u * z_u - z_v * z_v`
pub fn double_hadamard(zu: &[f64], zv: &[f64]) -> Vec<f64> {
    zu.iter().zip(zv).map(|(u, v)| u * u - v * v).collect()
}

/// `2 grad f(z * z) * z`
pub fn pullback_gradient<F: Objective + ?Sized>(f: &F, z: &[f64]) -> Vec<f64> {
    let x = hadamard_square(z);
    let gf = f.gradient(&x);
    gf.iter().zip(z).map(|(g, zi)| 2.0 * g * zi).collect()
}

/// `2 grad f(x) * d + 4 z * (Hess f(x) (z * d))` with `x = z * z`.
pub fn pullback_hessian_vec<F: Objective + ?Sized>(f: &F, z: &[f64], d: &[f64]) -> Result<Vec<f64>> {
    let x = hadamard_square(z);
    let zd: Vec<f64> = z.iter().zip(d).map(|(a, b)| a * b).collect();
    let hzd = f.hessian_vec(&x, &zd).ok_or(Error::MissingHessian)?;
    let gf = f.gradient(&x);
    Ok((0..z.len()).map(|i| 2.0 * gf[i] * d[i] + 4.0 * z[i] * hzd[i]).collect())
}

/// Gradient-Lipschitz constant of the pullback on the sphere: `4L + 2M`.
pub fn transfer_lipschitz(l: f64, m: f64) -> Result<f64> {
    if !(l >= 0.0) || !(m >= 0.0) {
        return Err(Error::InvalidArgument("Lipschitz constants must be nonnegative"));
    }
    Ok(4.0 * l + 2.0 * m)
}

/// `g(z) = f(z * z)`, itself an [`Objective`] over `z`.
#[derive(Debug, Clone, Copy)]
pub struct Pullback<F> {
    base: F,
}

impl<F: Objective> Pullback<F> {
    pub fn new(base: F) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &F {
        &self.base
    }
}

impl<F: Objective> Objective for Pullback<F> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn value(&self, z: &[f64]) -> f64 {
        self.base.value(&hadamard_square(z))
    }

    fn gradient(&self, z: &[f64]) -> Vec<f64> {
        pullback_gradient(&self.base, z)
    }

    fn value_and_gradient(&self, z: &[f64]) -> (f64, Vec<f64>) {
        let (v, gf) = self.base.value_and_gradient(&hadamard_square(z));
        (v, gf.iter().zip(z).map(|(g, zi)| 2.0 * g * zi).collect())
    }

    fn hessian_vec(&self, z: &[f64], d: &[f64]) -> Option<Vec<f64>> {
        pullback_hessian_vec(&self.base, z, d).ok()
    }

    fn has_hessian(&self) -> bool {
        self.base.has_hessian()
    }

    fn lipschitz_grad(&self) -> Option<f64> {
        let l = self.base.lipschitz_grad()?;
        let m = self.base.grad_inf_bound()?;
        transfer_lipschitz(l, m).ok()
    }
}

/// `g(z_u, z_v) = f(z_u * z_u - z_v * z_v)` over the stacked vector
/// `(z_u, z_v)` of length `2n`.
#[derive(Debug, Clone, Copy)]
pub struct DoublePullback<F> {
    base: F,
}

impl<F: Objective> DoublePullback<F> {
    pub fn new(base: F) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    /// Maps a stacked `(z_u, z_v)` to `x`.
    pub fn point(&self, z: &[f64]) -> Vec<f64> {
        let n = self.base.dim();
        double_hadamard(&z[..n], &z[n..])
    }
}

impl<F: Objective> Objective for DoublePullback<F> {
    fn dim(&self) -> usize {
        2 * self.base.dim()
    }

    fn value(&self, z: &[f64]) -> f64 {
        self.base.value(&self.point(z))
    }

    fn gradient(&self, z: &[f64]) -> Vec<f64> {
        self.value_and_gradient(z).1
    }

    fn value_and_gradient(&self, z: &[f64]) -> (f64, Vec<f64>) {
        let n = self.base.dim();
        let (v, gf) = self.base.value_and_gradient(&self.point(z));
        let mut g = Vec::with_capacity(2 * n);
        g.extend((0..n).map(|i| 2.0 * gf[i] * z[i]));
        g.extend((0..n).map(|i| -2.0 * gf[i] * z[n + i]));
        (v, g)
    }

    fn hessian_vec(&self, z: &[f64], d: &[f64]) -> Option<Vec<f64>> {
        let n = self.base.dim();
        let x = self.point(z);
        let (zu, zv) = z.split_at(n);
        let (du, dv) = d.split_at(n);
        // u = J d with J = [diag(z_u), -diag(z_v)]
        let u: Vec<f64> = (0..n).map(|i| zu[i] * du[i] - zv[i] * dv[i]).collect();
        let hu = self.base.hessian_vec(&x, &u)?;
        let gf = self.base.gradient(&x);
        let mut out = Vec::with_capacity(2 * n);
        out.extend((0..n).map(|i| 2.0 * gf[i] * du[i] + 4.0 * zu[i] * hu[i]));
        out.extend((0..n).map(|i| -2.0 * gf[i] * dv[i] - 4.0 * zv[i] * hu[i]));
        Some(out)
    }

    fn has_hessian(&self) -> bool {
        self.base.has_hessian()
    }
}
