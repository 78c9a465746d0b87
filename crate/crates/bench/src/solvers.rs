//! Solver selection and the default settings used by the benchmark grid.

use hadopt::baselines::{emda, frank_wolfe, pgd_linesearch, EmdaConfig, FwConfig, FwStep, PgdConfig, ProjectionAlgo};
use hadopt::optim::{
    had_prgd, had_rgd, had_rgd_aw, had_rgd_bb, had_rgd_bb_l1, AwConfig, BbConfig, PrgdConfig, RgdConfig,
};
use hadopt::{Error, Objective, RunTrace, SimplexPoint};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum SolverKind {
    HadRgd,
    HadPrgd,
    HadRgdAw,
    HadRgdBb,
    /// Barzilai-Borwein on the doubled sphere, for problems over the l1 ball.
    HadRgdBbL1,
    PgdLs,
    Emda,
    FrankWolfe,
    PairwiseFrankWolfe,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::HadRgd => "had_rgd",
            SolverKind::HadPrgd => "had_prgd",
            SolverKind::HadRgdAw => "had_rgd_aw",
            SolverKind::HadRgdBb => "had_rgd_bb",
            SolverKind::HadRgdBbL1 => "had_rgd_bb_l1",
            SolverKind::PgdLs => "pgd_ls",
            SolverKind::Emda => "emda",
            SolverKind::FrankWolfe => "frank_wolfe",
            SolverKind::PairwiseFrankWolfe => "pairwise_frank_wolfe",
        }
    }

    pub fn is_l1(self) -> bool {
        self == SolverKind::HadRgdBbL1
    }

    fn is_frank_wolfe(self) -> bool {
        matches!(self, SolverKind::FrankWolfe | SolverKind::PairwiseFrankWolfe)
    }

    /// Iteration budget when the config does not set one: 1000, or
    /// `ceil(1000 sqrt(n))` for the Frank-Wolfe methods.
    pub fn default_max_iters(self, n: usize) -> usize {
        if self.is_frank_wolfe() {
            (1000.0 * (n as f64).sqrt()).ceil() as usize
        } else {
            1000
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FwStepRule {
    Schedule,
    Exact,
    DemyanovRubinov,
}

/// One solver entry of a grid. Every field but `solver` overrides a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    pub solver: SolverKind,
    /// Name used in output files; defaults to the solver name.
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub max_iters: Option<usize>,
    /// Fixed step, or first trial step for the line-search methods.
    #[serde(default)]
    pub step: Option<f64>,
    #[serde(default)]
    pub grad_tol: Option<f64>,
    #[serde(default)]
    pub fw_step: Option<FwStepRule>,
    #[serde(default)]
    pub projection: Option<ProjectionAlgo>,
}

impl SolverSpec {
    pub fn new(solver: SolverKind) -> Self {
        Self { solver, label: None, max_iters: None, step: None, grad_tol: None, fw_step: None, projection: None }
    }

    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.solver.name().to_owned())
    }

    pub fn validate(&self) -> Result<(), String> {
        if let Some(label) = &self.label {
            if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                return Err("labels may only contain ASCII letters, digits, '_' and '-'".into());
            }
        }
        if self.max_iters == Some(0) {
            return Err("max_iters must be at least 1".into());
        }
        if self.step.is_some_and(|s| !(s > 0.0) || !s.is_finite()) {
            return Err("step must be positive and finite".into());
        }
        if self.grad_tol.is_some_and(|t| !(t >= 0.0)) {
            return Err("grad_tol must be nonnegative".into());
        }
        if self.step.is_some() && self.solver.is_frank_wolfe() {
            return Err("Frank-Wolfe takes fw_step, not step".into());
        }
        if self.fw_step.is_some() && !self.solver.is_frank_wolfe() {
            return Err("fw_step only applies to Frank-Wolfe".into());
        }
        if self.solver == SolverKind::PairwiseFrankWolfe && self.fw_step.is_some_and(|r| r != FwStepRule::Exact) {
            return Err("pairwise Frank-Wolfe needs the exact step".into());
        }
        if self.projection.is_some() && self.solver != SolverKind::PgdLs {
            return Err("projection only applies to pgd_ls".into());
        }
        Ok(())
    }
}

/// Facts about the cell a solver runs in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunContext {
    pub n: usize,
    /// Whether the minimizer lies on the boundary; picks the boundary
    /// defaults of the line-search methods.
    pub boundary: bool,
    pub target_value: Option<f64>,
    /// Seed for randomized solvers.
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub x: Vec<f64>,
    pub trace: RunTrace,
}

fn lipschitz(f: &dyn Objective) -> Result<f64, Error> {
    f.lipschitz_grad()
        .filter(|l| *l > 0.0)
        .ok_or(Error::InvalidArgument("solver needs a positive gradient Lipschitz constant"))
}

/// Runs one solver from the uniform point (the origin for the l1 solver).
///
/// With a target the gradient tolerance defaults to 0, so runs end on the
/// target or the budget only.
pub fn run_solver(spec: &SolverSpec, f: &dyn Objective, ctx: &RunContext) -> Result<Outcome, Error> {
    let n = ctx.n;
    let max_iters = spec.max_iters.unwrap_or_else(|| spec.solver.default_max_iters(n));
    let target_value = ctx.target_value;
    let default_tol = if target_value.is_some() { 0.0 } else { 1e-8 };
    let grad_tol = spec.grad_tol.unwrap_or(default_tol);
    let x0 = SimplexPoint::uniform(n);
    let sol = match spec.solver {
        SolverKind::HadRgd | SolverKind::HadPrgd => {
            let mut cfg = match spec.step {
                Some(s) => RgdConfig::new(s),
                None => RgdConfig::from_objective(f)
                    .ok_or(Error::InvalidArgument("fixed-step HadRGD needs L and M, or an explicit step"))?,
            };
            cfg.max_iters = max_iters;
            cfg.grad_tol = grad_tol;
            cfg.target_value = target_value;
            if spec.solver == SolverKind::HadRgd {
                had_rgd(f, &x0, &cfg)?
            } else {
                // the perturbation threshold scales with grad_tol, so keep it off zero
                if spec.grad_tol.is_none() {
                    cfg.grad_tol = 1e-8;
                }
                had_prgd(f, &x0, &PrgdConfig::new(cfg), ctx.seed)?
            }
        }
        SolverKind::HadRgdAw => {
            let l = lipschitz(f)?;
            let mut cfg = if ctx.boundary { AwConfig::boundary(n, l) } else { AwConfig::interior(n, l) };
            if let Some(s) = spec.step {
                cfg.default_step = s;
            }
            cfg.max_iters = max_iters;
            cfg.grad_tol = grad_tol;
            cfg.target_value = target_value;
            had_rgd_aw(f, &x0, &cfg)?
        }
        SolverKind::HadRgdBb | SolverKind::HadRgdBbL1 => {
            let mut cfg = if ctx.boundary { BbConfig::boundary(n, lipschitz(f)?) } else { BbConfig::interior() };
            if let Some(s) = spec.step {
                cfg.default_step = s;
            }
            cfg.max_iters = max_iters;
            cfg.grad_tol = grad_tol;
            cfg.target_value = target_value;
            if spec.solver == SolverKind::HadRgdBbL1 {
                let sol = had_rgd_bb_l1(f, &vec![0.0; n], &cfg)?;
                return Ok(Outcome { x: sol.x, trace: sol.trace });
            }
            had_rgd_bb(f, &x0, &cfg)?
        }
        SolverKind::PgdLs => {
            let mut cfg = match spec.step {
                Some(s) => PgdConfig::new(s),
                None => PgdConfig::from_lipschitz(lipschitz(f)?),
            };
            if let Some(p) = spec.projection {
                cfg.projection = p;
            }
            cfg.max_iters = max_iters;
            cfg.grad_tol = grad_tol;
            cfg.target_value = target_value;
            pgd_linesearch(f, &x0, &cfg)?
        }
        SolverKind::Emda => {
            let step = match spec.step {
                Some(s) => s,
                None => 1.0 / lipschitz(f)?,
            };
            let mut cfg = EmdaConfig::new(step);
            cfg.max_iters = max_iters;
            cfg.grad_tol = grad_tol;
            cfg.target_value = target_value;
            emda(f, &x0, &cfg)?
        }
        SolverKind::FrankWolfe | SolverKind::PairwiseFrankWolfe => {
            let step = match spec.fw_step.unwrap_or(FwStepRule::Exact) {
                FwStepRule::Schedule => FwStep::Schedule,
                FwStepRule::Exact => FwStep::ExactQuadratic,
                FwStepRule::DemyanovRubinov => FwStep::DemyanovRubinov { lipschitz: lipschitz(f)? },
            };
            let mut cfg = FwConfig::new(max_iters, step);
            cfg.pairwise = spec.solver == SolverKind::PairwiseFrankWolfe;
            cfg.gap_tol = grad_tol;
            cfg.target_value = target_value;
            frank_wolfe(f, &x0, &cfg)?
        }
    };
    Ok(Outcome { x: sol.x.into_vec(), trace: sol.trace })
}
