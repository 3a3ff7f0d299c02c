//! Simulation laboratory for random walks in time-random environments.
//!
//! Each step of the walk draws its increment from a step law `μ_k`, and the
//! laws `μ_1, μ_2, ...` are themselves i.i.d. random. For a bounded Lipschitz
//! path functional `f`, the quenched expectation `E_μ f(S_(n))` of the
//! rescaled broken line is a random variable (a function of the environment)
//! whose law converges to that of `E(f(B + σW) | W)`, with `B` and `W`
//! independent Brownian motions and `σ² = E(M_1²)`.
//!
//! The crate simulates both sides, measures the distance between them, and
//! wraps the experiments in a small CLI.
//!
//! ```
//! use rwre::{normalize_spec, EnvironmentSpec, PathFunctional, Seed};
//!
//! let spec = normalize_spec(&EnvironmentSpec::bio_normal(1.0, 1.0)?)?;
//! let f = PathFunctional::clipped_endpoint(2.0)?;
//! let fn_law = rwre::sample_fn(&spec, &f, 64, 50, 50, Seed::new(1))?;
//! let limit = rwre::sample_f(&f, spec.sigma2().sqrt(), 50, 50, 64, Seed::new(2))?;
//! let ks = rwre::metrics::ks_distance(&fn_law, &limit);
//! assert!((0.0..=1.0).contains(&ks));
//! # Ok::<(), rwre::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod env_models;
pub mod error;
pub mod experiment;
pub mod functionals;
pub mod limit_law;
pub mod metrics;
pub mod path;
pub mod quenched_walk;
pub mod rng;
mod serde_f64;
pub mod stats;

pub use env_models::{
    env_moments, make_environment_spec, normalize_spec, sample_environment, EnvRealization,
    EnvironmentSpec, Family, MomentReport, StepDistribution,
};
pub use error::{Error, Result};
pub use functionals::{barrier_probability, lipschitz_selfcheck, FunctionalKind, PathFunctional};
pub use limit_law::{
    brownian_expectation, conditional_limit_sample, sample_brownian_grid, sample_f, BrownianGrid,
};
pub use metrics::EmpiricalDist;
pub use path::GridPath;
pub use quenched_walk::{
    broken_line, quenched_expectation, quenched_stats, sample_fn, sample_trajectory, QuenchedStats,
    Trajectory,
};
pub use rng::Seed;

// The guide's chapters, compiled and run as doctests.
#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/environments.md")]
    mod environments {}
    #[doc = include_str!("../../../book/src/quenched_walk.md")]
    mod quenched_walk {}
    #[doc = include_str!("../../../book/src/functionals.md")]
    mod functionals {}
    #[doc = include_str!("../../../book/src/limit_law.md")]
    mod limit_law {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
