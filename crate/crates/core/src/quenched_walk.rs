//! Quenched trajectories, the scaled broken line `S_(n)`, the quenched
//! statistics `M_n, η_n, ζ_n`, and the two-level estimator of the law `F_n`
//! of `E_μ f(S_(n))`.
//!
//! Seeding: outer replica `j` draws its environment from `seed/"env"/j` and
//! its inner walks from `seed/"walk"/j/i`, so every number is tied to its
//! replica address and results do not depend on scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::env_models::{sample_environment, EnvRealization, EnvironmentSpec};
use crate::error::{Error, Result};
use crate::functionals::PathFunctional;
use crate::metrics::{DistMeta, EmpiricalDist};
use crate::path::GridPath;
use crate::rng::Seed;
use crate::stats::{mean_and_stderr, CompensatedSum};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    values: Vec<f64>,
}

impl Trajectory {
    /// `values` are `S_0..S_n`; `S_0` must be 0.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::ZeroLength("trajectory length n"));
        }
        if values[0] != 0.0 {
            return Err(Error::OutOfRange {
                name: "S_0".into(),
                value: values[0],
                reason: "walks start at 0",
            });
        }
        Ok(Trajectory { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len() - 1
    }
}

/// `S_k = X_1 + … + X_k` with `X_i ~ env.steps[i]` drawn from `seed`.
pub fn sample_trajectory(env: &EnvRealization, seed: Seed) -> Trajectory {
    assert!(!env.is_empty(), "environment must be nonempty");
    let mut rng = seed.rng();
    let mut values = Vec::with_capacity(env.len() + 1);
    let mut s = 0.0;
    values.push(s);
    for step in env.steps() {
        s += step.sample(&mut rng);
        values.push(s);
    }
    Trajectory { values }
}

/// `S_(n)`: vertex `k` of the returned path is `S_k / √n`.
pub fn broken_line(traj: &Trajectory) -> GridPath {
    let root_n = (traj.n() as f64).sqrt();
    GridPath::from_vertices(traj.values.iter().map(|s| s / root_n).collect())
}

// Fills `buf` (length n+1) with the broken line of one quenched walk; same
// arithmetic as `broken_line(sample_trajectory(..))`.
#[inline]
fn fill_broken_line(env: &EnvRealization, seed: Seed, root_n: f64, buf: &mut [f64]) {
    let mut rng = seed.rng();
    let mut s = 0.0;
    buf[0] = 0.0;
    for (slot, step) in buf[1..].iter_mut().zip(env.steps()) {
        s += step.sample(&mut rng);
        *slot = s / root_n;
    }
}

/// Quenched mean, variance and α-moment partial sums.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuenchedStats {
    pub alpha: f64,
    /// `M_1..M_n`
    pub means: Vec<f64>,
    /// `η_1..η_n`
    pub etas: Vec<f64>,
    /// `ζ_1..ζ_n`
    pub zetas: Vec<f64>,
}

impl QuenchedStats {
    pub fn m(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.means[k - 1]
        }
    }

    pub fn eta(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.etas[k - 1]
        }
    }

    pub fn zeta(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.zetas[k - 1]
        }
    }
}

/// Exact `M_k`, `η_k = Σ Var`, `ζ_k = Σ E_μ|X_i − m_i|^α` for a fixed
/// environment.
pub fn quenched_stats(env: &EnvRealization, alpha: f64) -> Result<QuenchedStats> {
    if !(alpha > 2.0) {
        return Err(Error::OutOfRange {
            name: "alpha".into(),
            value: alpha,
            reason: "must be > 2",
        });
    }
    let infinite: Vec<usize> = env
        .steps()
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.alpha_abs_central_moment(alpha).is_finite())
        .map(|(i, _)| i + 1)
        .collect();
    if !infinite.is_empty() {
        return Err(Error::InfiniteMoment {
            alpha,
            indices: infinite,
        });
    }
    let (mut m, mut e, mut z) = (
        CompensatedSum::new(),
        CompensatedSum::new(),
        CompensatedSum::new(),
    );
    let n = env.len();
    let mut stats = QuenchedStats {
        alpha,
        means: Vec::with_capacity(n),
        etas: Vec::with_capacity(n),
        zetas: Vec::with_capacity(n),
    };
    for step in env.steps() {
        m.add(step.mean());
        e.add(step.variance());
        z.add(step.alpha_abs_central_moment(alpha));
        stats.means.push(m.value());
        stats.etas.push(e.value());
        stats.zetas.push(z.value());
    }
    Ok(stats)
}

/// Monte Carlo estimate of `E_μ f(S_(n))` over `inner` quenched walks, with
/// its standard error. Replica `i` uses stream `seed/i`.
pub fn quenched_expectation(
    env: &EnvRealization,
    f: &PathFunctional,
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
    if env.is_empty() {
        return Err(Error::ZeroLength("environment length"));
    }
    let root_n = (env.len() as f64).sqrt();
    let mut buf = vec![0.0; env.len() + 1];
    let values: Vec<f64> = (0..inner as u64)
        .map(|i| {
            fill_broken_line(env, seed.index(i), root_n, &mut buf);
            f.evaluate_vertices(&buf)
        })
        .collect();
    Ok(mean_and_stderr(&values))
}

/// Sample of `outer` independent draws of `E_μ f(S_(n))`, each estimated with
/// `inner` quenched walks. Parallel over the outer loop; the result does not
/// depend on the thread count.
pub fn sample_fn(
    spec: &EnvironmentSpec,
    f: &PathFunctional,
    n: usize,
    outer: usize,
    inner: usize,
    seed: Seed,
) -> Result<EmpiricalDist> {
    if outer == 0 {
        return Err(Error::ZeroLength("outer"));
    }
    let env_root = seed.child("env");
    let walk_root = seed.child("walk");
    let estimates: Vec<(f64, f64)> = (0..outer as u64)
        .into_par_iter()
        .map(|j| {
            let env = sample_environment(spec, n, env_root.index(j))?;
            quenched_expectation(&env, f, inner, walk_root.index(j))
        })
        .collect::<Result<_>>()?;
    let max_inner_stderr = estimates.iter().fold(0.0f64, |acc, e| acc.max(e.1));
    let values = estimates.into_iter().map(|e| e.0).collect();
    let meta = DistMeta {
        n: Some(n),
        outer,
        inner,
        max_inner_stderr,
        seed: seed.as_tuple(),
        sigma: None,
        mesh: None,
    };
    EmpiricalDist::with_meta(values, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env_models::{normalize_spec, StepDistribution};

    fn normal_env(n: usize) -> EnvRealization {
        EnvRealization::from_steps(vec![StepDistribution::Normal { mean: 0.0, sd: 1.0 }; n])
    }

    #[test]
    fn point_mass_trajectory_is_zero() {
        let env = EnvRealization::from_steps(vec![StepDistribution::PointMass { value: 0.0 }; 9]);
        let t = sample_trajectory(&env, Seed::new(1));
        assert!(t.values().iter().all(|&v| v == 0.0));
        assert_eq!(t.n(), 9);
    }

    #[test]
    fn trajectory_is_deterministic() {
        let spec = normalize_spec(&EnvironmentSpec::bio_normal(1.0, 1.0).unwrap()).unwrap();
        let env = sample_environment(&spec, 50, Seed::new(2)).unwrap();
        assert_eq!(
            sample_trajectory(&env, Seed::new(3)),
            sample_trajectory(&env, Seed::new(3))
        );
        assert_ne!(
            sample_trajectory(&env, Seed::new(3)),
            sample_trajectory(&env, Seed::new(4))
        );
    }

    #[test]
    fn broken_line_formula() {
        let t = Trajectory::from_values(vec![0.0, 1.0, -1.0]).unwrap();
        let p = broken_line(&t);
        assert!((p.eval(0.25) - 0.5 / 2f64.sqrt()).abs() < 1e-15);
        for k in 0..=2 {
            assert_eq!(p.eval(k as f64 / 2.0), t.values()[k] / 2f64.sqrt());
        }
        assert_eq!(p.eval(1.0), -1.0 / 2f64.sqrt());
    }

    #[test]
    fn trajectory_rejects_nonzero_start() {
        assert!(Trajectory::from_values(vec![1.0, 2.0]).is_err());
        assert!(Trajectory::from_values(vec![0.0]).is_err());
    }

    #[test]
    fn endpoint_variance_matches_clt() {
        let n = 10_000;
        let env = normal_env(n);
        let reps = 10_000u64;
        let ends: Vec<f64> = (0..reps)
            .map(|i| {
                let t = sample_trajectory(&env, Seed::new(9).index(i));
                t.values()[n] / (n as f64).sqrt()
            })
            .collect();
        let var = crate::stats::sample_variance(&ends);
        assert!((var - 1.0).abs() < 0.05, "var = {var}");
    }

    #[test]
    fn stats_point_mass() {
        let env = EnvRealization::from_steps(vec![
            StepDistribution::PointMass { value: 0.5 },
            StepDistribution::PointMass { value: -2.0 },
            StepDistribution::PointMass { value: 1.0 },
        ]);
        let s = quenched_stats(&env, 3.0).unwrap();
        assert_eq!(s.means, vec![0.5, -1.5, -0.5]);
        assert_eq!(s.etas, vec![0.0; 3]);
        assert_eq!(s.zetas, vec![0.0; 3]);
    }

    #[test]
    fn stats_errors() {
        let env = EnvRealization::from_steps(vec![
            StepDistribution::Normal { mean: 0.0, sd: 1.0 },
            StepDistribution::SymmetricPareto {
                center: 0.0,
                scale: 1.0,
                tail: 3.5,
            },
            StepDistribution::SymmetricPareto {
                center: 0.0,
                scale: 1.0,
                tail: 3.0,
            },
        ]);
        match quenched_stats(&env, 3.2) {
            Err(Error::InfiniteMoment { indices, .. }) => assert_eq!(indices, vec![3]),
            other => panic!("{other:?}"),
        }
        assert!(quenched_stats(&env, 2.0).is_err());
    }

    #[test]
    fn stats_monotone_and_increments() {
        let spec = normalize_spec(
            &EnvironmentSpec::new(
                crate::env_models::Family::RademacherScale,
                &[("mean_sd", 0.5), ("scale_lo", 0.2), ("scale_hi", 1.4)],
            )
            .unwrap(),
        )
        .unwrap();
        let env = sample_environment(&spec, 200, Seed::new(4)).unwrap();
        let s = quenched_stats(&env, 3.0).unwrap();
        for k in 1..200 {
            assert!(s.etas[k] >= s.etas[k - 1]);
            assert!(s.zetas[k] >= s.zetas[k - 1]);
            let inc = s.m(k + 1) - s.m(k);
            assert!((inc - env.steps()[k].mean()).abs() < 1e-12);
        }
    }

    #[test]
    fn expectation_point_mass_is_exact() {
        let env = EnvRealization::from_steps(vec![StepDistribution::PointMass { value: 0.2 }; 16]);
        let f = PathFunctional::clipped_endpoint(10.0).unwrap();
        let (est, se) = quenched_expectation(&env, &f, 10, Seed::new(1)).unwrap();
        assert_eq!(se, 0.0);
        assert!((est - 3.2 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn expectation_symmetric_law_centered() {
        let env = normal_env(64);
        let f = PathFunctional::clipped_endpoint(1.0).unwrap();
        let (est, se) = quenched_expectation(&env, &f, 4000, Seed::new(8)).unwrap();
        assert!(est.abs() < 3.0 * se, "{est} ± {se}");
        assert!(est.abs() <= 1.0);
    }

    #[test]
    fn expectation_matches_trajectory_route() {
        let spec = normalize_spec(&EnvironmentSpec::bio_normal(1.0, 1.0).unwrap()).unwrap();
        let env = sample_environment(&spec, 33, Seed::new(2)).unwrap();
        let f = PathFunctional::clipped_abs_max(1.5).unwrap();
        let seed = Seed::new(6);
        let (est, _) = quenched_expectation(&env, &f, 25, seed).unwrap();
        let direct: Vec<f64> = (0..25)
            .map(|i| f.evaluate(&broken_line(&sample_trajectory(&env, seed.index(i)))))
            .collect();
        assert_eq!(est, mean_and_stderr(&direct).0);
    }

    #[test]
    fn expectation_needs_two_replicas() {
        let f = PathFunctional::clipped_endpoint(1.0).unwrap();
        assert!(quenched_expectation(&normal_env(4), &f, 1, Seed::new(0)).is_err());
    }

    #[test]
    fn sample_fn_shapes() {
        let spec = normalize_spec(&EnvironmentSpec::bio_normal(0.0, 1.0).unwrap()).unwrap();
        let f = PathFunctional::clipped_endpoint(2.0).unwrap();
        let single = sample_fn(&spec, &f, 16, 1, 10, Seed::new(3)).unwrap();
        assert_eq!(single.len(), 1);
        let d = sample_fn(&spec, &f, 16, 200, 400, Seed::new(3)).unwrap();
        let meta = d.meta().unwrap();
        // degenerate environment: the spread is pure inner noise
        let spread = d.values()[199] - d.values()[0];
        assert!(spread < 10.0 * meta.max_inner_stderr, "{spread}");
        assert!(d.values().iter().all(|v| v.abs() <= 2.0));
    }
}
