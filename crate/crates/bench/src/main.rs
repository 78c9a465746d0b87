#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::{self, File};
use std::io::{self, BufWriter};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use hadopt::hadamard::hadamard_sqrt;
use hadopt::kkt::{kkt_check_original, verify_correspondence, CorrespondenceError, KktReport, OriginalProblem};
use hadopt::problems::{gen_least_squares, TruthKind};
use hadopt::Objective;
use hadopt_bench::hprb::HprbProblem;
use hadopt_bench::output::{write_all, write_trace};
use hadopt_bench::projection::projection_bench;
use hadopt_bench::solvers::{run_solver, RunContext};
use hadopt_bench::{emit_plot_data, run_bench, BenchConfig, Figure, SolverKind, SolverSpec, Status};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "hadopt", version, about = "Benchmarks for simplex-constrained solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a solver x dimension x trial grid from a JSON config.
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `out_dir` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Global seed; overrides `seed` in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads. Keep at 1 when timings matter.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        gzip_traces: bool,
    },
    /// Time the four simplex projections on Gaussian inputs and check they agree.
    ProjectBench {
        #[arg(long, value_delimiter = ',', default_values_t = [1000, 10_000, 100_000])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for `projection.csv`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve one problem and certify the result on both sides of the map.
    KktCheck {
        /// HPRB problem file. Without it the problem comes from --config.
        #[arg(long, conflicts_with = "config")]
        problem: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Dimension when generating from a config; defaults to its first.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = SolverKind::HadRgdBb)]
        solver: SolverKind,
        #[arg(long, default_value_t = 10_000)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// JSON report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one grid cell and write its trace CSV.
    Trace {
        #[arg(long)]
        config: PathBuf,
        /// Solver label; defaults to the first solver of the config.
        #[arg(long)]
        solver: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        trial: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Trace CSV path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a least-squares problem and save it as HPRB.
    GenProblem {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Truth::Interior)]
        truth: Truth,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Truth {
    Interior,
    Boundary,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Config(anyhow::Error),
    Panic,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Config(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Bench { config, out, seed, jobs, gzip_traces } => bench(&config, out, seed, jobs, gzip_traces),
        Command::ProjectBench { sizes, repeats, seed, out } => project_bench(&sizes, repeats, seed, out.as_deref()),
        Command::KktCheck { problem, config, n, seed, solver, max_iters, tol, out } => {
            kkt_check(problem.as_deref(), config.as_deref(), n, seed, solver, max_iters, tol, out.as_deref())
        }
        Command::Trace { config, solver, n, trial, seed, out } => {
            trace(&config, solver.as_deref(), n, trial, seed, out.as_deref())
        }
        Command::GenProblem { n, truth, seed, out } => gen_problem(n, truth, seed, &out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Panic) => ExitCode::from(2),
    }
}

fn bench(config: &Path, out: Option<PathBuf>, seed: Option<u64>, jobs: usize, gzip: bool) -> Result<(), Failure> {
    let mut cfg = BenchConfig::load(config).map_err(anyhow::Error::from)?;
    if let Some(out) = out {
        cfg.out_dir = out;
    }
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    let result = run_bench(&cfg, jobs);
    write_all(&result, &cfg.out_dir, gzip)?;
    for figure in Figure::ALL {
        let path = cfg.out_dir.join(figure.file_name());
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        if let Err(e) = emit_plot_data(&result, figure, BufWriter::new(file)) {
            eprintln!("skipping {}: {e}", path.display());
            fs::remove_file(&path).ok();
        }
    }
    println!("{:<24} {:>8} {:>6} {:>10} {:>12} {:>12}", "solver", "n", "conv", "mean iters", "mean secs", "mean f");
    for cell in result.summary() {
        let mean = |s: Option<hadopt::stats::Summary>| s.map_or(f64::NAN, |s| s.mean);
        println!(
            "{:<24} {:>8} {:>3}/{:<2} {:>10.1} {:>12.4e} {:>12.4e}",
            cell.solver,
            cell.n,
            cell.converged,
            cell.trials,
            mean(cell.iterations),
            mean(cell.wall_seconds),
            mean(cell.final_f)
        );
    }
    for f in &result.failures {
        eprintln!("{} n={} trial={}: {}", f.solver, f.n, f.trial, f.message);
    }
    println!("wrote {}", cfg.out_dir.display());
    if result.any_panicked() {
        return Err(Failure::Panic);
    }
    Ok(())
}

fn project_bench(sizes: &[usize], repeats: usize, seed: u64, out: Option<&Path>) -> Result<(), Failure> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(anyhow::anyhow!("sizes must be positive").into());
    }
    let rows = catch_unwind(|| projection_bench(sizes, repeats, seed)).map_err(|_| Failure::Panic)?;
    println!("{:<8} {:>8} {:>14} {:>14} {:>12}", "algo", "n", "median secs", "min secs", "max dev");
    for r in &rows {
        println!(
            "{:<8} {:>8} {:>14.4e} {:>14.4e} {:>12.2e}",
            r.algorithm, r.n, r.median_seconds, r.min_seconds, r.max_deviation
        );
    }
    let worst = rows.iter().map(|r| r.max_deviation).fold(0.0, f64::max);
    println!("largest deviation from the sort-based projection: {worst:.3e}");
    if let Some(dir) = out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join("projection.csv");
        let mut w = csv::Writer::from_path(&path).with_context(|| format!("creating {}", path.display()))?;
        for r in &rows {
            w.serialize(r).map_err(anyhow::Error::from)?;
        }
        w.flush().map_err(anyhow::Error::from)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct KktOutput {
    solver: &'static str,
    n: usize,
    iterations: usize,
    final_f: f64,
    status: hadopt::RunStatus,
    /// Whether both sides agree; always true for problems checked on one side only.
    agree: bool,
    disagreement: Option<&'static str>,
    flips_checked: usize,
    original: KktReport,
    parametrized: Option<KktReport>,
}

#[allow(clippy::too_many_arguments)]
fn kkt_check(
    problem: Option<&Path>,
    config: Option<&Path>,
    n: Option<usize>,
    seed: Option<u64>,
    solver: SolverKind,
    max_iters: usize,
    tol: f64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    if !(tol > 0.0) {
        return Err(anyhow::anyhow!("tol must be positive").into());
    }
    let (f, domain, boundary): (Box<dyn Objective + Send + Sync>, OriginalProblem, bool) = match (problem, config) {
        (Some(path), _) => {
            let p = HprbProblem::load(path).with_context(|| format!("reading {}", path.display()))?;
            (Box::new(p.objective()), OriginalProblem::Simplex, p.boundary)
        }
        (None, Some(path)) => {
            let cfg = BenchConfig::load(path).map_err(anyhow::Error::from)?;
            let n = n.unwrap_or(cfg.dimensions[0]);
            let inst = cfg.problem.build(n, seed.unwrap_or(cfg.seed)).context("generating the problem")?;
            (inst.objective, inst.domain, true)
        }
        (None, None) => return Err(anyhow::anyhow!("pass --problem or --config").into()),
    };
    let l1 = matches!(domain, OriginalProblem::L1Ball);
    if l1 != solver.is_l1() {
        return Err(anyhow::anyhow!("solver {} does not run on this problem's domain", solver.name()).into());
    }
    let mut spec = SolverSpec::new(solver);
    spec.max_iters = Some(max_iters);
    spec.grad_tol = Some(1e-12);
    let ctx = RunContext { n: f.dim(), boundary, target_value: None, seed: seed.unwrap_or(0) };
    let outcome = catch_unwind(AssertUnwindSafe(|| run_solver(&spec, f.as_ref(), &ctx)))
        .map_err(|_| Failure::Panic)?
        .context("running the solver")?;
    let mut report = KktOutput {
        solver: solver.name(),
        n: f.dim(),
        iterations: outcome.trace.iterations(),
        final_f: outcome.trace.final_value().unwrap_or(f64::NAN),
        status: outcome.trace.status,
        agree: true,
        disagreement: None,
        flips_checked: 0,
        original: kkt_check_original(f.as_ref(), &outcome.x, &domain, tol, l1).context("checking the solution")?,
        parametrized: None,
    };
    if matches!(domain, OriginalProblem::Simplex) {
        let z = hadamard_sqrt(&outcome.x).context("mapping the solution to the sphere")?;
        match verify_correspondence(f.as_ref(), &z, tol) {
            Ok(c) => {
                report.original = c.original;
                report.parametrized = Some(c.parametrized);
                report.flips_checked = c.flips_checked;
            }
            Err(CorrespondenceError::Disagreement { reason, original, parametrized }) => {
                report.agree = false;
                report.disagreement = Some(reason);
                report.original = *original;
                report.parametrized = Some(*parametrized);
            }
            Err(CorrespondenceError::Analysis(e)) => return Err(anyhow::Error::from(e).into()),
        }
    }
    let json = serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)?;
    match out {
        Some(path) => fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => println!("{json}"),
    }
    Ok(())
}

fn trace(
    config: &Path,
    solver: Option<&str>,
    n: Option<usize>,
    trial: usize,
    seed: Option<u64>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let mut cfg = BenchConfig::load(config).map_err(anyhow::Error::from)?;
    let label = solver.map_or_else(|| cfg.solvers[0].label(), str::to_owned);
    cfg.solvers.retain(|s| s.label() == label);
    if cfg.solvers.is_empty() {
        return Err(anyhow::anyhow!("no solver labelled {label} in the config").into());
    }
    let n = n.unwrap_or(cfg.dimensions[0]);
    cfg.dimensions = vec![n];
    cfg.validate().map_err(anyhow::Error::from)?;
    // a one-trial grid whose seed is the requested trial's seed
    cfg.seed = seed.unwrap_or(cfg.seed).wrapping_add(trial as u64);
    cfg.trials = 1;
    let result = run_bench(&cfg, 1);
    let row = &result.rows[0];
    eprintln!(
        "{} n={} seed={}: {:?} after {} iterations, f = {:e}",
        row.solver, row.n, row.seed, row.status, row.iterations, row.final_f
    );
    for f in &result.failures {
        eprintln!("{}", f.message);
    }
    let records = &result.traces[0].records;
    match out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_trace(BufWriter::new(file), records)?;
        }
        None => write_trace(io::stdout().lock(), records)?,
    }
    match row.status {
        Status::Panicked => Err(Failure::Panic),
        _ => Ok(()),
    }
}

fn gen_problem(n: usize, truth: Truth, seed: u64, out: &Path) -> Result<(), Failure> {
    if n < 2 {
        return Err(anyhow::anyhow!("n must be at least 2").into());
    }
    let kind = match truth {
        Truth::Interior => TruthKind::Interior,
        Truth::Boundary => TruthKind::Boundary,
    };
    let p = gen_least_squares(n, kind, seed).context("generating the problem")?;
    HprbProblem::from(&p).save(out).with_context(|| format!("writing {}", out.display()))?;
    println!("wrote {} ({} x {})", out.display(), p.a().rows(), p.a().cols());
    Ok(())
}
