//! Per-iteration run records shared by every solver.

use alloc::vec::Vec;

use crate::simplex::SimplexPoint;

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RunStatus {
    /// Gradient tolerance or target value reached.
    Converged,
    /// Iteration budget exhausted.
    MaxIters,
    /// Budget exhausted and at least one line search hit its backtrack cap.
    LineSearchFailed,
}

/// One iteration of a solver.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceRecord {
    pub iteration: usize,
    /// Objective value after the iteration (`f(x_k) = g(z_k)`).
    pub value: f64,
    /// Stationarity measure at the iterate: the Riemannian gradient norm
    /// for the sphere methods, a method-specific analogue for baselines.
    pub grad_norm: f64,
    /// Accepted step size.
    pub step: f64,
    /// Seconds since the run started. Always 0 without the `std` feature.
    pub seconds: f64,
    pub backtracks: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunTrace {
    pub records: Vec<TraceRecord>,
    pub status: RunStatus,
    /// Number of line searches that hit their cap and took the last trial.
    pub line_search_failures: usize,
}

impl RunTrace {
    pub(crate) fn new() -> Self {
        Self { records: Vec::new(), status: RunStatus::MaxIters, line_search_failures: 0 }
    }

    pub(crate) fn push(&mut self, record: TraceRecord) {
        debug_assert!(self.records.last().is_none_or(|r| r.iteration < record.iteration));
        self.records.push(record);
    }

    pub(crate) fn finish(mut self, converged: bool) -> Self {
        self.status = if converged {
            RunStatus::Converged
        } else if self.line_search_failures > 0 {
            RunStatus::LineSearchFailed
        } else {
            RunStatus::MaxIters
        };
        self
    }

    /// Number of iterations performed (index of the last record).
    pub fn iterations(&self) -> usize {
        self.records.last().map_or(0, |r| r.iteration)
    }

    pub fn final_value(&self) -> Option<f64> {
        self.records.last().map(|r| r.value)
    }

    /// First iteration whose value is at most `target`, with its time stamp.
    pub fn first_reaching(&self, target: f64) -> Option<&TraceRecord> {
        self.records.iter().find(|r| r.value <= target)
    }
}

/// Terminal point of a simplex solver and its trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: SimplexPoint,
    pub trace: RunTrace,
}

/// Wall clock started at construction.
pub(crate) struct Stopwatch {
    #[cfg(feature = "std")]
    start: std::time::Instant,
}

impl Stopwatch {
    pub(crate) fn start() -> Self {
        Self {
            #[cfg(feature = "std")]
            start: std::time::Instant::now(),
        }
    }

    pub(crate) fn seconds(&self) -> f64 {
        #[cfg(feature = "std")]
        {
            self.start.elapsed().as_secs_f64()
        }
        #[cfg(not(feature = "std"))]
        {
            0.0
        }
    }
}
