//! Runs a benchmark grid and collects per-trial results.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use hadopt::problems::{ProblemSpec, TruthKind};
use hadopt::stats::{summarize, Summary};
use hadopt::{RunStatus, TraceRecord};
use serde::{Deserialize, Serialize};

use crate::config::BenchConfig;
use crate::solvers::{run_solver, RunContext};

/// Terminal status of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Reached the target, or the solver's own tolerance when no target is set.
    Converged,
    /// Stopped on a tolerance before reaching the target.
    Stalled,
    MaxIters,
    LineSearchFailed,
    /// Problem generation or solver setup returned an error.
    Error,
    Panicked,
}

impl Status {
    pub fn is_failure(self) -> bool {
        matches!(self, Status::Error | Status::Panicked)
    }
}

/// One row of `results.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub solver: String,
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub iterations: usize,
    pub wall_seconds: f64,
    pub final_f: f64,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialTrace {
    pub solver: String,
    pub n: usize,
    pub trial: usize,
    pub records: Vec<TraceRecord>,
}

/// Aggregates over the non-failed trials of one (solver, n) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub solver: String,
    pub n: usize,
    pub trials: usize,
    pub converged: usize,
    pub failed: usize,
    pub iterations: Option<Summary>,
    pub wall_seconds: Option<Summary>,
    pub final_f: Option<Summary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub solver: String,
    pub n: usize,
    pub trial: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub f_star: Option<f64>,
    pub target_value: Option<f64>,
    /// Ordered by dimension, trial, then solver order in the config.
    pub rows: Vec<TrialRecord>,
    /// Parallel to `rows`.
    pub traces: Vec<TrialTrace>,
    pub failures: Vec<Failure>,
}

impl BenchResult {
    pub fn any_panicked(&self) -> bool {
        self.rows.iter().any(|r| r.status == Status::Panicked)
    }

    /// Cells in row order.
    pub fn summary(&self) -> Vec<CellSummary> {
        let mut cells: Vec<CellSummary> = Vec::new();
        let mut members: Vec<Vec<&TrialRecord>> = Vec::new();
        for row in &self.rows {
            match cells.iter().position(|c| c.solver == row.solver && c.n == row.n) {
                Some(i) => members[i].push(row),
                None => {
                    cells.push(CellSummary {
                        solver: row.solver.clone(),
                        n: row.n,
                        trials: 0,
                        converged: 0,
                        failed: 0,
                        iterations: None,
                        wall_seconds: None,
                        final_f: None,
                    });
                    members.push(vec![row]);
                }
            }
        }
        for (cell, rows) in cells.iter_mut().zip(&members) {
            cell.trials = rows.len();
            cell.converged = rows.iter().filter(|r| r.status == Status::Converged).count();
            cell.failed = rows.iter().filter(|r| r.status.is_failure()).count();
            let ok: Vec<&&TrialRecord> = rows.iter().filter(|r| !r.status.is_failure()).collect();
            let column = |get: fn(&TrialRecord) -> f64| summarize(&ok.iter().map(|r| get(r)).collect::<Vec<_>>());
            cell.iterations = column(|r| r.iterations as f64);
            cell.wall_seconds = column(|r| r.wall_seconds);
            cell.final_f = column(|r| r.final_f);
        }
        cells
    }
}

/// Whether the problem's minimizer lies on the simplex boundary.
fn boundary_truth(spec: &ProblemSpec) -> bool {
    match spec {
        ProblemSpec::LeastSquares { truth } | ProblemSpec::WeightedLs { truth } => *truth == TruthKind::Boundary,
        ProblemSpec::StrictSaddle | ProblemSpec::Lasso { .. } => true,
        ProblemSpec::RandomQuadratic { .. } => false,
    }
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_owned()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "solver panicked".to_owned()
    }
}

struct TaskOutput {
    rows: Vec<TrialRecord>,
    traces: Vec<TrialTrace>,
    failures: Vec<Failure>,
}

fn run_task(cfg: &BenchConfig, n: usize, trial: usize) -> TaskOutput {
    let seed = cfg.seed.wrapping_add(trial as u64);
    let mut out = TaskOutput { rows: Vec::new(), traces: Vec::new(), failures: Vec::new() };
    let instance = catch_unwind(AssertUnwindSafe(|| cfg.problem.build(n, seed)));
    let setup_failure = match &instance {
        Ok(Ok(_)) => None,
        Ok(Err(e)) => Some((Status::Error, format!("problem generation: {e}"))),
        Err(p) => Some((Status::Panicked, format!("problem generation: {}", panic_message(p.as_ref())))),
    };
    let ctx = RunContext { n, boundary: boundary_truth(&cfg.problem), target_value: cfg.target_value(), seed };
    for spec in &cfg.solvers {
        let solver = spec.label();
        let mut row = TrialRecord {
            solver: solver.clone(),
            n,
            trial,
            seed,
            iterations: 0,
            wall_seconds: 0.0,
            final_f: f64::NAN,
            status: Status::Error,
        };
        let mut records = Vec::new();
        let mut failure = setup_failure.clone();
        if let Ok(Ok(inst)) = &instance {
            let f = inst.objective.as_ref();
            let start = Instant::now();
            let result = catch_unwind(AssertUnwindSafe(|| run_solver(spec, f, &ctx)));
            row.wall_seconds = start.elapsed().as_secs_f64();
            match result {
                Ok(Ok(outcome)) => {
                    row.iterations = outcome.trace.iterations();
                    row.final_f = outcome.trace.final_value().unwrap_or(f64::NAN);
                    row.status = classify(outcome.trace.status, row.final_f, ctx.target_value);
                    records = outcome.trace.records;
                }
                Ok(Err(e)) => failure = Some((Status::Error, e.to_string())),
                Err(p) => failure = Some((Status::Panicked, panic_message(p.as_ref()))),
            }
        }
        if let Some((status, message)) = failure {
            row.status = status;
            out.failures.push(Failure { solver: solver.clone(), n, trial, message });
        }
        out.rows.push(row);
        out.traces.push(TrialTrace { solver, n, trial, records });
    }
    out
}

fn classify(status: RunStatus, final_f: f64, target: Option<f64>) -> Status {
    match status {
        RunStatus::Converged => match target {
            Some(t) if !(final_f <= t) => Status::Stalled,
            _ => Status::Converged,
        },
        RunStatus::MaxIters => Status::MaxIters,
        RunStatus::LineSearchFailed => Status::LineSearchFailed,
    }
}

/// Runs every (dimension, trial) task, each over all solvers on one shared
/// problem instance. Tasks are spread over `jobs` worker threads; output
/// order does not depend on `jobs`.
pub fn run_bench(cfg: &BenchConfig, jobs: usize) -> BenchResult {
    let tasks: Vec<(usize, usize)> =
        cfg.dimensions.iter().flat_map(|&n| (0..cfg.trials).map(move |t| (n, t))).collect();
    let slots: Vec<Mutex<Option<TaskOutput>>> = tasks.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let worker = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        let Some(&(n, trial)) = tasks.get(i) else { break };
        let out = run_task(cfg, n, trial);
        *slots[i].lock().unwrap_or_else(|e| e.into_inner()) = Some(out);
    };
    let jobs = jobs.clamp(1, tasks.len().max(1));
    if jobs == 1 {
        worker();
    } else {
        std::thread::scope(|s| {
            for _ in 0..jobs {
                s.spawn(worker);
            }
        });
    }
    let mut result = BenchResult {
        f_star: cfg.f_star(),
        target_value: cfg.target_value(),
        rows: Vec::new(),
        traces: Vec::new(),
        failures: Vec::new(),
    };
    for slot in slots {
        let out = slot.into_inner().unwrap_or_else(|e| e.into_inner()).expect("every task ran");
        result.rows.extend(out.rows);
        result.traces.extend(out.traces);
        result.failures.extend(out.failures);
    }
    result
}
