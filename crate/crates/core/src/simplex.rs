use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Entries may dip this far below zero (projection round-off).
pub const NONNEG_SLACK: f64 = 1e-12;
/// Allowed deviation of the coordinate sum from one.
pub const SUM_SLACK: f64 = 1e-10;

/// A point of the probability simplex `{x : sum x = 1, x >= 0}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimplexPoint {
    coords: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("simplex point needs at least one coordinate"));
        }
        if let Some((index, &value)) = coords.iter().enumerate().find(|(_, &v)| v < -NONNEG_SLACK || v.is_nan()) {
            return Err(Error::NegativeEntry { index, value });
        }
        let residual = (coords.iter().sum::<f64>() - 1.0).abs();
        if residual > SUM_SLACK || residual.is_nan() {
            return Err(Error::Infeasible { residual });
        }
        Ok(Self { coords })
    }

    /// Barycentre `(1/n, ..., 1/n)`.
    pub fn uniform(n: usize) -> Self {
        Self { coords: vec![1.0 / n as f64; n] }
    }

    pub fn vertex(n: usize, i: usize) -> Self {
        Self { coords: crate::vector::unit(n, i) }
    }

    pub(crate) fn new_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(Self::new(coords.clone()).is_ok(), "infeasible: {coords:?}");
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coords
    }

    /// Smallest coordinate.
    pub fn min_entry(&self) -> f64 {
        self.coords.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

impl AsRef<[f64]> for SimplexPoint {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}
