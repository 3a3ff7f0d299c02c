//! The limit random measure `E(f(B + σW) | W)`.
//!
//! `B` and `W` are independent standard Brownian motions, simulated as linear
//! interpolations of Gaussian random walks on a fixed mesh. The outer loop
//! draws `W`, the inner loop averages over `B`. With `σ = 0` every outer
//! value estimates the same constant `E f(B)`.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::PathFunctional;
use crate::metrics::{DistMeta, EmpiricalDist};
use crate::path::GridPath;
use crate::rng::Seed;
use crate::stats::mean_and_stderr;

/// Brownian path on the mesh `k/m`; vertex `k` is a sum of `k` independent
/// `N(0, 1/m)` increments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BrownianGrid {
    path: GridPath,
}

impl BrownianGrid {
    pub fn zero(mesh: usize) -> Self {
        BrownianGrid {
            path: GridPath::zero(mesh),
        }
    }

    pub fn mesh(&self) -> usize {
        self.path.mesh()
    }

    pub fn path(&self) -> &GridPath {
        &self.path
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.path.eval(t)
    }
}

fn fill_brownian(seed: Seed, out: &mut [f64]) {
    let mut rng = seed.rng();
    let sd = ((out.len() - 1) as f64).sqrt().recip();
    let mut level = 0.0;
    out[0] = 0.0;
    for slot in out[1..].iter_mut() {
        let z: f64 = StandardNormal.sample(&mut rng);
        level += sd * z;
        *slot = level;
    }
}

pub fn sample_brownian_grid(mesh: usize, seed: Seed) -> BrownianGrid {
    assert!(mesh >= 1, "mesh must be at least 1");
    let mut path = GridPath::zero(mesh);
    fill_brownian(seed, path.vertices_mut());
    BrownianGrid { path }
}

/// Estimate `E(f(B + σW) | W)` from `inner` independent `B` paths on the mesh
/// of `w`. Replica `i` uses stream `seed/i`.
pub fn conditional_limit_sample(
    f: &PathFunctional,
    sigma: f64,
    w: &BrownianGrid,
    inner: usize,
    seed: Seed,
) -> Result<(f64, f64)> {
    if inner < 2 {
        return Err(Error::OutOfRange {
            name: "inner".into(),
            value: inner as f64,
            reason: "need at least 2 inner replicas",
        });
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::OutOfRange {
            name: "sigma".into(),
            value: sigma,
            reason: "must be finite and >= 0",
        });
    }
    let wv = w.path.vertices();
    let mut buf = vec![0.0; wv.len()];
    let values: Vec<f64> = (0..inner as u64)
        .map(|i| {
            fill_brownian(seed.index(i), &mut buf);
            if sigma != 0.0 {
                for (b, &wk) in buf.iter_mut().zip(wv) {
                    *b += sigma * wk;
                }
            }
            f.evaluate_vertices(&buf)
        })
        .collect();
    Ok(mean_and_stderr(&values))
}

/// Plain Monte Carlo estimate of `E f(B)` on mesh `m`.
pub fn brownian_expectation(
    f: &PathFunctional,
    mesh: usize,
    replicas: usize,
    seed: Seed,
) -> Result<(f64, f64)> {
    conditional_limit_sample(f, 0.0, &BrownianGrid::zero(mesh), replicas, seed)
}

/// Empirical law `F` of `E(f(B + σW) | W)` from `outer` draws of `W`.
pub fn sample_f(
    f: &PathFunctional,
    sigma: f64,
    outer: usize,
    inner: usize,
    mesh: usize,
    seed: Seed,
) -> Result<EmpiricalDist> {
    if outer == 0 {
        return Err(Error::ZeroLength("outer"));
    }
    if mesh == 0 {
        return Err(Error::ZeroLength("mesh"));
    }
    let w_root = seed.child("W");
    let b_root = seed.child("B");
    let estimates: Vec<(f64, f64)> = (0..outer as u64)
        .into_par_iter()
        .map(|j| {
            let w = sample_brownian_grid(mesh, w_root.index(j));
            conditional_limit_sample(f, sigma, &w, inner, b_root.index(j))
        })
        .collect::<Result<_>>()?;
    let max_inner_stderr = estimates.iter().fold(0.0f64, |acc, e| acc.max(e.1));
    let meta = DistMeta {
        n: None,
        outer,
        inner,
        max_inner_stderr,
        seed: seed.as_tuple(),
        sigma: Some(sigma),
        mesh: Some(mesh),
    };
    EmpiricalDist::with_meta(estimates.into_iter().map(|e| e.0).collect(), meta)
}
