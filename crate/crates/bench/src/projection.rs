//! Timing and agreement of the simplex projection algorithms.

use std::time::Instant;

use hadopt::baselines::{project_simplex, ProjectionAlgo};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionRow {
    pub algorithm: &'static str,
    pub n: usize,
    pub median_seconds: f64,
    pub min_seconds: f64,
    /// Largest entrywise distance to the sort-based projection over all
    /// repeats.
    pub max_deviation: f64,
}

/// Projects `repeats` fresh Gaussian vectors of each size with every
/// algorithm. Inputs are shared across algorithms.
pub fn projection_bench(sizes: &[usize], repeats: usize, seed: u64) -> Vec<ProjectionRow> {
    let repeats = repeats.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for &n in sizes {
        let inputs: Vec<Vec<f64>> =
            (0..repeats).map(|_| (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()).collect();
        let reference: Vec<Vec<f64>> =
            inputs.iter().map(|y| project_simplex(y, ProjectionAlgo::SortProject).into_vec()).collect();
        for algo in ProjectionAlgo::ALL {
            let mut times = Vec::with_capacity(repeats);
            let mut max_deviation: f64 = 0.0;
            for (y, r) in inputs.iter().zip(&reference) {
                let start = Instant::now();
                let x = project_simplex(y, algo);
                times.push(start.elapsed().as_secs_f64());
                let dev = x.coords().iter().zip(r).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                max_deviation = max_deviation.max(dev);
            }
            times.sort_by(f64::total_cmp);
            rows.push(ProjectionRow {
                algorithm: algo.name(),
                n,
                median_seconds: times[times.len() / 2],
                min_seconds: times[0],
                max_deviation,
            });
        }
    }
    rows
}
