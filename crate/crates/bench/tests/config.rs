use std::path::Path;

use hadopt_bench::{BenchConfig, ConfigError, SolverKind};

#[test]
fn shipped_configs_are_valid() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = BenchConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(cfg.trials, 10);
        assert!(cfg.solvers.iter().any(|s| s.solver == SolverKind::HadRgdBb));
        seen += 1;
    }
    assert!(seen >= 2);
}

fn check(body: &str) -> Result<BenchConfig, ConfigError> {
    BenchConfig::from_json(body)
}

#[test]
fn solvers_must_match_the_domain() {
    let simplex_solver_on_lasso = r#"{
        "problem": {"kind": "lasso", "sparsity": 2},
        "solvers": [{"solver": "pgd_ls"}],
        "dimensions": [10]
    }"#;
    assert!(check(simplex_solver_on_lasso).is_err());
    let ok = simplex_solver_on_lasso.replace("pgd_ls", "had_rgd_bb_l1");
    assert!(check(&ok).is_ok());
    let l1_on_simplex = r#"{
        "problem": {"kind": "strict_saddle"},
        "solvers": [{"solver": "had_rgd_bb_l1"}],
        "dimensions": [10]
    }"#;
    assert!(check(l1_on_simplex).is_err());
}

#[test]
fn overrides_are_checked() {
    let base = r#"{
        "problem": {"kind": "least_squares", "truth": "boundary"},
        "solvers": [SOLVERS],
        "dimensions": [10, 20]
    }"#;
    let with = |s: &str| check(&base.replace("SOLVERS", s));
    assert!(with(r#"{"solver": "frank_wolfe", "fw_step": "schedule", "max_iters": 50}"#).is_ok());
    assert!(with(r#"{"solver": "pgd_ls", "projection": "CondatProject", "step": 0.5}"#).is_ok());
    assert!(with(r#"{"solver": "frank_wolfe", "step": 0.1}"#).is_err());
    assert!(with(r#"{"solver": "pairwise_frank_wolfe", "fw_step": "schedule"}"#).is_err());
    assert!(with(r#"{"solver": "had_rgd", "projection": "SortProject"}"#).is_err());
    assert!(with(r#"{"solver": "had_rgd", "max_iters": 0}"#).is_err());
    assert!(with(r#"{"solver": "had_rgd", "step": -1}"#).is_err());
    assert!(with(r#"{"solver": "had_rgd", "label": "a b"}"#).is_err());
    assert!(with(r#"{"solver": "had_rgd"}, {"solver": "had_rgd"}"#).is_err());
    assert!(with(r#"{"solver": "had_rgd"}, {"solver": "had_rgd", "label": "rgd2"}"#).is_ok());
    assert!(with(r#"{"solver": "had_rgd", "unknown": 1}"#).is_err());
}

#[test]
fn frank_wolfe_budget_scales_with_sqrt_n() {
    assert_eq!(SolverKind::FrankWolfe.default_max_iters(100), 10_000);
    assert_eq!(SolverKind::PairwiseFrankWolfe.default_max_iters(2), 1415);
    assert_eq!(SolverKind::PgdLs.default_max_iters(10_000), 1000);
}
