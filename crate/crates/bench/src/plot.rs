//! Long-format CSV data for the standard figures.

use std::collections::BTreeMap;
use std::io::Write;

use hadopt::stats::summarize;
use serde::{Deserialize, Serialize};

use crate::runner::BenchResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Figure {
    /// Iterations per run against the dimension.
    IterVsN,
    /// Solver wall-clock seconds against the dimension.
    TimeVsN,
    /// `log10(f - f_star)` against the iteration.
    ConvergenceCurve,
}

impl Figure {
    pub const ALL: [Figure; 3] = [Figure::IterVsN, Figure::TimeVsN, Figure::ConvergenceCurve];

    pub fn file_name(self) -> &'static str {
        match self {
            Figure::IterVsN => "iter_vs_n.csv",
            Figure::TimeVsN => "time_vs_n.csv",
            Figure::ConvergenceCurve => "convergence.csv",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PlotError {
    #[error("the result has no successful trials")]
    Empty,
    #[error("convergence curves need a known optimal value")]
    NoOptimum,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

const STATS: [&str; 3] = ["mean", "min", "max"];

/// Writes the figure's data. `IterVsN` and `TimeVsN` have columns
/// `solver,n,statistic,value` with one mean/min/max triple per cell.
/// `ConvergenceCurve` adds an `iteration` column after `n` and aggregates
/// over the trials that ran that long; gaps at or below the optimum are
/// clamped to the smallest positive double before the logarithm.
pub fn emit_plot_data<W: Write>(result: &BenchResult, figure: Figure, sink: W) -> Result<(), PlotError> {
    if !result.rows.iter().any(|r| !r.status.is_failure()) {
        return Err(PlotError::Empty);
    }
    let mut w = csv::Writer::from_writer(sink);
    match figure {
        Figure::IterVsN | Figure::TimeVsN => {
            w.write_record(["solver", "n", "statistic", "value"])?;
            for cell in result.summary() {
                let s = if figure == Figure::IterVsN { cell.iterations } else { cell.wall_seconds };
                let Some(s) = s else { continue };
                for (name, v) in STATS.iter().zip([s.mean, s.min, s.max]) {
                    w.write_record([cell.solver.clone(), cell.n.to_string(), (*name).to_owned(), v.to_string()])?;
                }
            }
        }
        Figure::ConvergenceCurve => {
            let f_star = result.f_star.ok_or(PlotError::NoOptimum)?;
            w.write_record(["solver", "n", "iteration", "statistic", "value"])?;
            // cell order follows the rows; iterations ascend within a cell
            let mut order: Vec<(String, usize)> = Vec::new();
            let mut curves: BTreeMap<(String, usize), BTreeMap<usize, Vec<f64>>> = BTreeMap::new();
            for (row, trace) in result.rows.iter().zip(&result.traces) {
                if row.status.is_failure() {
                    continue;
                }
                let key = (row.solver.clone(), row.n);
                if !curves.contains_key(&key) {
                    order.push(key.clone());
                }
                let curve = curves.entry(key).or_default();
                for r in &trace.records {
                    let gap = (r.value - f_star).max(f64::MIN_POSITIVE);
                    curve.entry(r.iteration).or_default().push(gap.log10());
                }
            }
            for key in order {
                for (k, values) in &curves[&key] {
                    let Some(s) = summarize(values) else { continue };
                    for (name, v) in STATS.iter().zip([s.mean, s.min, s.max]) {
                        w.write_record([
                            key.0.clone(),
                            key.1.to_string(),
                            k.to_string(),
                            (*name).to_owned(),
                            v.to_string(),
                        ])?;
                    }
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}
