//! Minimization over the probability simplex (and the unit simplex, the
//! weighted simplex and the l1 ball) through the Hadamard parametrization
//! `x = z * z`.
//!
//! The substitution turns the simplex into the unit sphere, so a constrained
//! problem `min f(x), x in simplex` becomes a smooth Riemannian problem
//! `min g(z) = f(z * z), |z| = 1`. This crate contains:
//!
//! - [`hadamard`]: the parametrization and pullback objectives with analytic derivatives
//! - [`manifold`]: sphere / ball geometry, exponential map, Riemannian gradient and Hessian
//! - [`optim`]: HadRGD, perturbed HadRGD, Armijo-Wolfe and Barzilai-Borwein variants
//! - [`baselines`]: simplex projections, projected gradient, mirror descent, Frank-Wolfe
//! - [`kkt`]: numerical first/second-order KKT certification on both sides of the map
//! - [`problems`]: seeded benchmark generators
//!
//! ```
//! use hadopt::optim::{had_rgd_bb, BbConfig};
//! use hadopt::problems::{gen_least_squares, TruthKind};
//! use hadopt::SimplexPoint;
//!
//! let p = gen_least_squares(200, TruthKind::Interior, 1)?;
//! let cfg = BbConfig { target_value: Some(1e-8), ..BbConfig::interior() };
//! let sol = had_rgd_bb(&p.objective, &SimplexPoint::uniform(200), &cfg)?;
//! assert!(sol.trace.final_value().unwrap() <= 1e-8);
//! # Ok::<(), hadopt::Error>(())
//! ```
//!
//! The crate is `no_std` with `alloc`. The default `std` feature only adds a
//! wall clock for run traces and `std::error::Error` plumbing.

#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod baselines;
mod error;
pub mod hadamard;
pub mod kkt;
pub mod linalg;
pub mod manifold;
pub mod objective;
pub mod optim;
pub mod problems;
mod simplex;
pub mod stats;
pub mod trace;
pub mod vector;

pub use error::{Error, Result};
pub use objective::Objective;
pub use simplex::SimplexPoint;
pub use trace::{RunStatus, RunTrace, Solution, TraceRecord};
