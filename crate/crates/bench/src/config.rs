//! Benchmark grid configuration, read from JSON.

use std::path::{Path, PathBuf};

use hadopt::problems::ProblemSpec;
use serde::{Deserialize, Serialize};

use crate::solvers::SolverSpec;

/// Raised for configurations that are unreadable or violate an invariant.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

fn default_trials() -> usize {
    10
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("results")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub problem: ProblemSpec,
    pub solvers: Vec<SolverSpec>,
    /// Problem dimensions, strictly ascending.
    pub dimensions: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Stop a run once `f(x) - f_star <= target`. Without it every run goes
    /// to its iteration budget or gradient tolerance.
    #[serde(default)]
    pub target: Option<f64>,
    /// Optimal value used for the target test. Required when the problem
    /// has no known optimum and a target is set.
    #[serde(default)]
    pub f_star: Option<f64>,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

impl BenchConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_owned(), source })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |msg: &str| Err(ConfigError::Invalid(msg.to_owned()));
        if self.trials == 0 {
            return invalid("trials must be at least 1");
        }
        if self.solvers.is_empty() {
            return invalid("at least one solver is required");
        }
        if self.dimensions.is_empty() {
            return invalid("at least one dimension is required");
        }
        if self.dimensions[0] < 2 {
            return invalid("dimensions must be at least 2");
        }
        if self.dimensions.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("dimensions must be sorted ascending without repeats");
        }
        if let Some(t) = self.target {
            if !(t > 0.0) || !t.is_finite() {
                return invalid("target must be positive and finite");
            }
            if self.f_star.is_none() && known_optimum(&self.problem).is_none() {
                return invalid("this problem has no known optimum; set f_star to use a target");
            }
        }
        if let ProblemSpec::Lasso { sparsity } = self.problem {
            if sparsity == 0 || sparsity > self.dimensions[0] {
                return invalid("lasso sparsity must lie in 1..=n for every dimension");
            }
        }
        let mut labels: Vec<String> = self.solvers.iter().map(SolverSpec::label).collect();
        labels.sort();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return invalid("solver labels must be unique");
        }
        for s in &self.solvers {
            s.validate().map_err(|e| ConfigError::Invalid(format!("solver {}: {e}", s.label())))?;
            if s.solver.is_l1() != matches!(self.problem, ProblemSpec::Lasso { .. }) {
                return Err(ConfigError::Invalid(format!(
                    "solver {} does not run on the domain of this problem",
                    s.label()
                )));
            }
        }
        Ok(())
    }

    /// The optimal value the target is measured against.
    pub fn f_star(&self) -> Option<f64> {
        self.f_star.or_else(|| known_optimum(&self.problem))
    }

    /// Absolute objective value at which runs stop.
    pub fn target_value(&self) -> Option<f64> {
        Some(self.f_star()? + self.target?)
    }
}

/// Optimal value of a generated problem, when it is known by construction.
pub fn known_optimum(spec: &ProblemSpec) -> Option<f64> {
    match spec {
        ProblemSpec::LeastSquares { .. } | ProblemSpec::Lasso { .. } | ProblemSpec::WeightedLs { .. } => Some(0.0),
        ProblemSpec::StrictSaddle => Some(-1.0),
        ProblemSpec::RandomQuadratic { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "problem": {"kind": "least_squares", "truth": "interior"},
        "solvers": [{"solver": "had_rgd_bb"}],
        "dimensions": [10]
    }"#;

    #[test]
    fn defaults_fill_in() {
        let cfg = BenchConfig::from_json(MINIMAL).unwrap();
        assert_eq!(cfg.trials, 10);
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.target_value(), None);
        assert_eq!(cfg.f_star(), Some(0.0));
    }

    #[test]
    fn unsorted_dimensions_rejected() {
        let text = MINIMAL.replace("[10]", "[20, 10]");
        assert!(matches!(BenchConfig::from_json(&text), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn unknown_optimum_needs_f_star() {
        let text = r#"{
            "problem": {"kind": "random_quadratic", "convex": true},
            "solvers": [{"solver": "pgd_ls"}],
            "dimensions": [5],
            "target": 1e-6
        }"#;
        assert!(BenchConfig::from_json(text).is_err());
        let with = text.replace("\"target\"", "\"f_star\": -3.0, \"target\"");
        let cfg = BenchConfig::from_json(&with).unwrap();
        assert_eq!(cfg.target_value(), Some(-3.0 + 1e-6));
    }
}
