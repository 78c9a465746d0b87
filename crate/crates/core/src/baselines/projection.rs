use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::simplex::SimplexPoint;

/// Euclidean projection routines onto the simplex. All four compute the same
/// threshold `tau` with `x = max(y - tau, 0)` and differ only in how they
/// find it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ProjectionAlgo {
    /// Full sort, then a scan from the largest entry down.
    SortProject,
    /// Quickselect-style partitioning around the middle element of the
    /// remaining index list.
    PivotProject,
    /// Expected linear-time partitioning around uniformly random pivots
    /// (fixed seed, so results are reproducible).
    DuchiProject,
    /// Condat's single pass with a lazily pruned candidate list.
    CondatProject,
}

impl ProjectionAlgo {
    pub const ALL: [ProjectionAlgo; 4] = [
        ProjectionAlgo::SortProject,
        ProjectionAlgo::PivotProject,
        ProjectionAlgo::DuchiProject,
        ProjectionAlgo::CondatProject,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProjectionAlgo::SortProject => "sort",
            ProjectionAlgo::PivotProject => "pivot",
            ProjectionAlgo::DuchiProject => "duchi",
            ProjectionAlgo::CondatProject => "condat",
        }
    }
}

/// `argmin { |x - y| : x in simplex }`.
///
/// # Panics
///
/// If `y` is empty or has a non-finite entry.
pub fn project_simplex(y: &[f64], algo: ProjectionAlgo) -> SimplexPoint {
    assert!(!y.is_empty(), "cannot project an empty vector");
    assert!(y.iter().all(|v| v.is_finite()), "projection input must be finite");
    let tau = match algo {
        ProjectionAlgo::SortProject => sort_threshold(y),
        ProjectionAlgo::PivotProject => pivot_threshold(y),
        ProjectionAlgo::DuchiProject => duchi_threshold(y),
        ProjectionAlgo::CondatProject => condat_threshold(y),
    };
    SimplexPoint::new_unchecked(y.iter().map(|v| (v - tau).max(0.0)).collect())
}

fn sort_threshold(y: &[f64]) -> f64 {
    let n = y.len();
    let mut s = y.to_vec();
    s.sort_unstable_by(|a, b| a.total_cmp(b));
    let mut acc = 0.0;
    for i in (1..n).rev() {
        acc += s[i];
        let t = (acc - 1.0) / (n - i) as f64;
        if t >= s[i - 1] {
            return t;
        }
    }
    (acc + s[0] - 1.0) / n as f64
}

/// Shared partition loop of the two pivoting methods. `choose` picks a
/// position in the current candidate list.
fn partition_threshold(y: &[f64], mut choose: impl FnMut(usize) -> usize) -> f64 {
    let mut u: Vec<usize> = (0..y.len()).collect();
    let (mut s, mut rho) = (0.0, 0usize);
    let mut greater = Vec::new();
    let mut less = Vec::new();
    while !u.is_empty() {
        let k = u[choose(u.len())];
        let pivot = y[k];
        greater.clear();
        less.clear();
        let mut ds = pivot;
        for &j in &u {
            if j == k {
                continue;
            }
            if y[j] >= pivot {
                ds += y[j];
                greater.push(j);
            } else {
                less.push(j);
            }
        }
        let drho = greater.len() + 1;
        if s + ds - (rho + drho) as f64 * pivot < 1.0 {
            s += ds;
            rho += drho;
            core::mem::swap(&mut u, &mut less);
        } else {
            core::mem::swap(&mut u, &mut greater);
        }
    }
    (s - 1.0) / rho as f64
}

fn pivot_threshold(y: &[f64]) -> f64 {
    partition_threshold(y, |len| len / 2)
}

fn duchi_threshold(y: &[f64]) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd0c1);
    partition_threshold(y, |len| rng.random_range(0..len))
}

fn condat_threshold(y: &[f64]) -> f64 {
    let mut v: Vec<f64> = Vec::with_capacity(y.len());
    let mut spill: Vec<f64> = Vec::new();
    v.push(y[0]);
    let mut rho = y[0] - 1.0;
    for &yn in &y[1..] {
        if yn > rho {
            rho += (yn - rho) / (v.len() + 1) as f64;
            if rho > yn - 1.0 {
                v.push(yn);
            } else {
                spill.append(&mut v);
                v.push(yn);
                rho = yn - 1.0;
            }
        }
    }
    for &yv in &spill {
        if yv > rho {
            v.push(yv);
            rho += (yv - rho) / v.len() as f64;
        }
    }
    loop {
        let before = v.len();
        let mut i = 0;
        while i < v.len() {
            let yv = v[i];
            if yv <= rho {
                v.swap_remove(i);
                rho += (rho - yv) / v.len() as f64;
            } else {
                i += 1;
            }
        }
        if v.len() == before {
            break;
        }
    }
    rho
}
