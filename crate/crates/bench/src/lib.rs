//! Benchmark harness for `hadopt`: grid runs over problems, solvers and
//! dimensions, result files, plot data, the HPRB problem format and a
//! projection micro-benchmark.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod hprb;
pub mod output;
pub mod plot;
pub mod projection;
pub mod runner;
pub mod solvers;

pub use config::{BenchConfig, ConfigError};
pub use plot::{emit_plot_data, Figure};
pub use runner::{run_bench, BenchResult, Status, TrialRecord};
pub use solvers::{SolverKind, SolverSpec};
