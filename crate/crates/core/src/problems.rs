//! Seeded benchmark problems.
//!
//! Every generator draws from a `ChaCha8Rng` seeded with the given seed, so
//! the same arguments always produce bit-identical problems.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::baselines::{project_simplex, ProjectionAlgo};
use crate::error::{Error, Result};
use crate::kkt::OriginalProblem;
use crate::linalg::DenseMatrix;
use crate::objective::{LeastSquares, Objective, Quadratic, Rescaled, SquaredNorm};
use crate::simplex::SimplexPoint;
use crate::vector::{dist2, norm1};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TruthKind {
    /// Uniform on the simplex: every entry positive.
    Interior,
    /// Projection of a Gaussian vector: typically many zero entries.
    Boundary,
}

/// `min |A x - b|^2` over the simplex with `b = A x_true`, so the optimal
/// value is 0.
#[derive(Debug, Clone)]
pub struct LeastSquaresProblem {
    pub objective: LeastSquares,
    pub x_true: SimplexPoint,
    pub truth_kind: TruthKind,
    pub seed: u64,
}

impl LeastSquaresProblem {
    pub fn a(&self) -> &DenseMatrix {
        self.objective.a()
    }

    pub fn b(&self) -> &[f64] {
        self.objective.b()
    }
}

/// Number of rows used for dimension `n`: `max(1, round(n / 10))`.
pub fn rows_for(n: usize) -> usize {
    (libm::round(n as f64 / 10.0) as usize).max(1)
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument("dimension must be at least 2"));
    }
    Ok(())
}

fn sample_truth(rng: &mut ChaCha8Rng, n: usize, kind: TruthKind) -> SimplexPoint {
    match kind {
        TruthKind::Interior => {
            let e: Vec<f64> = (0..n).map(|_| rng.sample(Exp1)).collect();
            let s: f64 = e.iter().sum();
            SimplexPoint::new_unchecked(e.into_iter().map(|v| v / s).collect())
        }
        TruthKind::Boundary => {
            let g: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            project_simplex(&g, ProjectionAlgo::CondatProject)
        }
    }
}

/// Underdetermined least squares with `m = max(1, round(n / 10))` Gaussian
/// rows. The objective carries `L` and `M`.
pub fn gen_least_squares(n: usize, kind: TruthKind, seed: u64) -> Result<LeastSquaresProblem> {
    check_dim(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = gaussian_matrix(&mut rng, rows_for(n), n);
    let x_true = sample_truth(&mut rng, n, kind);
    let b = a.matvec(x_true.coords());
    Ok(LeastSquaresProblem { objective: LeastSquares::new(a, b).with_grad_inf_bound(), x_true, truth_kind: kind, seed })
}

/// `f(x) = -|x|^2`: the uniform point is a strict saddle on the simplex and
/// the vertices are the local minimizers.
pub fn gen_strict_saddle(n: usize) -> Result<SquaredNorm> {
    check_dim(n)?;
    Ok(SquaredNorm::new(n, -1.0))
}

/// `x^T Q x / 2 + c^T x` with Gaussian `c` and either `Q = G^T G / n`
/// (convex) or `Q = (G + G^T) / 2` (indefinite, Gaussian `G`).
pub fn gen_random_quadratic(n: usize, convex: bool, seed: u64) -> Result<Quadratic> {
    check_dim(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(&mut rng, n, n);
    let q = if convex {
        DenseMatrix::from_fn(n, n, |i, j| (0..n).map(|k| g.get(k, i) * g.get(k, j)).sum::<f64>() / n as f64)
    } else {
        DenseMatrix::from_fn(n, n, |i, j| 0.5 * (g.get(i, j) + g.get(j, i)))
    };
    let c: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    Ok(Quadratic::new(q, c))
}

/// Least squares over the l1 ball with a sparse ground truth on its
/// boundary and a reference solution.
#[derive(Debug, Clone)]
pub struct LassoProblem {
    pub objective: LeastSquares,
    pub x_true: Vec<f64>,
    /// Projected gradient on the l1 ball run until the step is below 1e-12.
    pub reference: Vec<f64>,
    pub sparsity: usize,
    pub seed: u64,
}

/// `2n` Gaussian rows, so the minimizer over the l1 ball is `x_true`
/// alone. `x_true` has `sparsity` nonzeros with random signs and unit
/// l1 norm.
pub fn gen_lasso(n: usize, sparsity: usize, seed: u64) -> Result<LassoProblem> {
    check_dim(n)?;
    if sparsity == 0 || sparsity > n {
        return Err(Error::InvalidArgument("sparsity must be in 1..=n"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = gaussian_matrix(&mut rng, 2 * n, n);
    let mut x_true = vec![0.0; n];
    for i in sample(&mut rng, n, sparsity).iter() {
        let mag: f64 = rng.sample(Exp1);
        x_true[i] = if rng.random::<bool>() { mag } else { -mag };
    }
    let s = norm1(&x_true);
    x_true.iter_mut().for_each(|v| *v /= s);
    let b = a.matvec(&x_true);
    let objective = LeastSquares::new(a, b);
    let reference = l1_projected_gradient(&objective, 1e-12, 1_000_000)?;
    Ok(LassoProblem { objective, x_true, reference, sparsity, seed })
}

/// Euclidean projection onto the l1 ball of radius 1.
pub fn project_l1_ball(y: &[f64]) -> Vec<f64> {
    if norm1(y) <= 1.0 {
        return y.to_vec();
    }
    let mag: Vec<f64> = y.iter().map(|v| v.abs()).collect();
    let p = project_simplex(&mag, ProjectionAlgo::CondatProject);
    p.coords().iter().zip(y).map(|(&m, &v)| if v < 0.0 { -m } else { m }).collect()
}

/// Projected gradient with step `1 / L` from the origin, stopped when
/// `|x_{k+1} - x_k| <= tol`.
pub fn l1_projected_gradient<F: Objective + ?Sized>(f: &F, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    let step = match f.lipschitz_grad() {
        Some(l) if l > 0.0 => 1.0 / l,
        _ => return Err(Error::InvalidArgument("reference solver needs a Lipschitz constant")),
    };
    let mut x = vec![0.0; f.dim()];
    for _ in 0..max_iter {
        let g = f.gradient(&x);
        let y: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - step * gi).collect();
        let next = project_l1_ball(&y);
        let moved = dist2(&next, &x);
        x = next;
        if moved <= tol {
            return Ok(x);
        }
    }
    Err(Error::NonConvergence { iterations: max_iter })
}

/// Least squares over the weighted simplex `{x >= 0, a^T x = 1}` with
/// weights uniform in `[0.5, 2]`.
#[derive(Debug, Clone)]
pub struct WeightedLeastSquaresProblem {
    pub objective: LeastSquares,
    pub weights: Vec<f64>,
    /// Feasible for the weighted simplex.
    pub x_true: Vec<f64>,
    pub truth_kind: TruthKind,
    pub seed: u64,
}

impl WeightedLeastSquaresProblem {
    /// The same problem over the probability simplex in `y = a * x`.
    pub fn rescaled(&self) -> Rescaled<LeastSquares> {
        Rescaled::new(self.objective.clone(), self.weights.clone()).expect("weights are positive")
    }
}

pub fn gen_weighted_least_squares(n: usize, kind: TruthKind, seed: u64) -> Result<WeightedLeastSquaresProblem> {
    check_dim(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = gaussian_matrix(&mut rng, rows_for(n), n);
    let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
    let y = sample_truth(&mut rng, n, kind);
    let x_true: Vec<f64> = y.coords().iter().zip(&weights).map(|(v, w)| v / w).collect();
    let b = a.matvec(&x_true);
    Ok(WeightedLeastSquaresProblem { objective: LeastSquares::new(a, b), weights, x_true, truth_kind: kind, seed })
}

/// Serializable description of a generated problem.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum ProblemSpec {
    LeastSquares { truth: TruthKind },
    RandomQuadratic { convex: bool },
    StrictSaddle,
    Lasso { sparsity: usize },
    WeightedLs { truth: TruthKind },
}

/// A generated problem in the form the solvers consume: an objective over
/// the probability simplex (or the l1 ball for lasso), its known optimal
/// value and ground truth when available.
pub struct Instance {
    pub objective: Box<dyn Objective + Send + Sync>,
    pub domain: OriginalProblem,
    pub f_star: Option<f64>,
    /// Optimal point in the coordinates of `objective`.
    pub x_star: Option<Vec<f64>>,
}

impl core::fmt::Debug for Instance {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Instance")
            .field("dim", &self.objective.dim())
            .field("domain", &self.domain)
            .field("f_star", &self.f_star)
            .finish_non_exhaustive()
    }
}

impl ProblemSpec {
    pub fn build(&self, n: usize, seed: u64) -> Result<Instance> {
        Ok(match *self {
            ProblemSpec::LeastSquares { truth } => {
                let p = gen_least_squares(n, truth, seed)?;
                Instance {
                    objective: Box::new(p.objective),
                    domain: OriginalProblem::Simplex,
                    f_star: Some(0.0),
                    x_star: Some(p.x_true.into_vec()),
                }
            }
            ProblemSpec::RandomQuadratic { convex } => Instance {
                objective: Box::new(gen_random_quadratic(n, convex, seed)?),
                domain: OriginalProblem::Simplex,
                f_star: None,
                x_star: None,
            },
            ProblemSpec::StrictSaddle => Instance {
                objective: Box::new(gen_strict_saddle(n)?),
                domain: OriginalProblem::Simplex,
                f_star: Some(-1.0),
                x_star: Some(SimplexPoint::vertex(n, 0).into_vec()),
            },
            ProblemSpec::Lasso { sparsity } => {
                let p = gen_lasso(n, sparsity, seed)?;
                Instance {
                    objective: Box::new(p.objective),
                    domain: OriginalProblem::L1Ball,
                    f_star: Some(0.0),
                    x_star: Some(p.x_true),
                }
            }
            ProblemSpec::WeightedLs { truth } => {
                let p = gen_weighted_least_squares(n, truth, seed)?;
                let r = p.rescaled();
                let y = r.from_original(&p.x_true);
                Instance {
                    objective: Box::new(r),
                    domain: OriginalProblem::Simplex,
                    f_star: Some(0.0),
                    x_star: Some(y),
                }
            }
        })
    }
}
