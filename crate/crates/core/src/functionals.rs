//! Bounded Lipschitz functionals on `C[0,1]`, evaluated exactly on
//! piecewise-linear paths.
//!
//! Every Lipschitz kind satisfies `|f(x)| ≤ L` and
//! `|f(x) − f(y)| ≤ K·sup_t |x(t) − y(t)|`. The barrier indicator is the one
//! non-Lipschitz member; it checks the path at its vertices only, which for
//! a walk's broken line are the lattice points `i/n`.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::env_models::EnvRealization;
use crate::error::{Error, Result};
use crate::path::GridPath;
use crate::quenched_walk::quenched_expectation;
use crate::rng::Seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionalKind {
    ClippedEndpoint,
    ClippedRunningMax,
    ClippedAbsMax,
    ClippedIntegral,
    SoftBarrier,
    BarrierIndicator,
}

impl FunctionalKind {
    pub const ALL: [FunctionalKind; 6] = [
        FunctionalKind::ClippedEndpoint,
        FunctionalKind::ClippedRunningMax,
        FunctionalKind::ClippedAbsMax,
        FunctionalKind::ClippedIntegral,
        FunctionalKind::SoftBarrier,
        FunctionalKind::BarrierIndicator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionalKind::ClippedEndpoint => "clipped_endpoint",
            FunctionalKind::ClippedRunningMax => "clipped_running_max",
            FunctionalKind::ClippedAbsMax => "clipped_abs_max",
            FunctionalKind::ClippedIntegral => "clipped_integral",
            FunctionalKind::SoftBarrier => "soft_barrier",
            FunctionalKind::BarrierIndicator => "barrier_indicator",
        }
    }
}

impl std::str::FromStr for FunctionalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FunctionalKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownFunctional(s.to_string()))
    }
}

/// A member of the functional catalog.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Descriptor", into = "Descriptor")]
pub enum PathFunctional {
    /// `clip(x(1))`
    ClippedEndpoint { clip: f64 },
    /// `clip(max_t x(t))`
    ClippedRunningMax { clip: f64 },
    /// `min(max_t |x(t)|, L)`
    ClippedAbsMax { clip: f64 },
    /// `clip(∫₀¹ x(t) dt)`
    ClippedIntegral { clip: f64 },
    /// `clamp(margin / width, 0, 1)` with
    /// `margin = min_t min(x(t) − c1, c2 − x(t))`.
    SoftBarrier { c1: f64, c2: f64, width: f64 },
    /// `1{c1 ≤ x(k/m) ≤ c2 for every vertex k}`.
    BarrierIndicator { c1: f64, c2: f64 },
}

impl PathFunctional {
    pub fn clipped_endpoint(clip: f64) -> Result<Self> {
        Self::build(PathFunctional::ClippedEndpoint { clip })
    }

    pub fn clipped_running_max(clip: f64) -> Result<Self> {
        Self::build(PathFunctional::ClippedRunningMax { clip })
    }

    pub fn clipped_abs_max(clip: f64) -> Result<Self> {
        Self::build(PathFunctional::ClippedAbsMax { clip })
    }

    pub fn clipped_integral(clip: f64) -> Result<Self> {
        Self::build(PathFunctional::ClippedIntegral { clip })
    }

    pub fn soft_barrier(c1: f64, c2: f64, width: f64) -> Result<Self> {
        Self::build(PathFunctional::SoftBarrier { c1, c2, width })
    }

    pub fn barrier_indicator(c1: f64, c2: f64) -> Result<Self> {
        Self::build(PathFunctional::BarrierIndicator { c1, c2 })
    }

    fn build(f: PathFunctional) -> Result<Self> {
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        let bad = |name: &str, value: f64, reason| {
            Err(Error::OutOfRange {
                name: name.to_string(),
                value,
                reason,
            })
        };
        match *self {
            PathFunctional::ClippedEndpoint { clip }
            | PathFunctional::ClippedRunningMax { clip }
            | PathFunctional::ClippedAbsMax { clip }
            | PathFunctional::ClippedIntegral { clip } => {
                if !(clip > 0.0 && clip.is_finite()) {
                    return bad("L", clip, "clip level must be positive and finite");
                }
            }
            PathFunctional::SoftBarrier { c1, c2, width } => {
                if !(width > 0.0 && width.is_finite()) {
                    return bad("width", width, "must be positive and finite");
                }
                check_barrier(c1, c2)?;
            }
            PathFunctional::BarrierIndicator { c1, c2 } => check_barrier(c1, c2)?,
        }
        Ok(())
    }

    pub fn kind(&self) -> FunctionalKind {
        match self {
            PathFunctional::ClippedEndpoint { .. } => FunctionalKind::ClippedEndpoint,
            PathFunctional::ClippedRunningMax { .. } => FunctionalKind::ClippedRunningMax,
            PathFunctional::ClippedAbsMax { .. } => FunctionalKind::ClippedAbsMax,
            PathFunctional::ClippedIntegral { .. } => FunctionalKind::ClippedIntegral,
            PathFunctional::SoftBarrier { .. } => FunctionalKind::SoftBarrier,
            PathFunctional::BarrierIndicator { .. } => FunctionalKind::BarrierIndicator,
        }
    }

    /// Lipschitz constant `K`; `None` for the barrier indicator.
    pub fn lipschitz(&self) -> Option<f64> {
        match *self {
            PathFunctional::SoftBarrier { width, .. } => Some(1.0 / width),
            PathFunctional::BarrierIndicator { .. } => None,
            _ => Some(1.0),
        }
    }

    /// Uniform bound `L`.
    pub fn bound(&self) -> f64 {
        match *self {
            PathFunctional::ClippedEndpoint { clip }
            | PathFunctional::ClippedRunningMax { clip }
            | PathFunctional::ClippedAbsMax { clip }
            | PathFunctional::ClippedIntegral { clip } => clip,
            PathFunctional::SoftBarrier { .. } | PathFunctional::BarrierIndicator { .. } => 1.0,
        }
    }

    pub fn evaluate(&self, path: &GridPath) -> f64 {
        self.evaluate_vertices(path.vertices())
    }

    /// Evaluate on the polyline through `vertices` (equally spaced on `[0,1]`).
    pub fn evaluate_vertices(&self, v: &[f64]) -> f64 {
        debug_assert!(v.len() >= 2);
        match *self {
            PathFunctional::ClippedEndpoint { clip } => v[v.len() - 1].clamp(-clip, clip),
            PathFunctional::ClippedRunningMax { clip } => v
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max)
                .clamp(-clip, clip),
            PathFunctional::ClippedAbsMax { clip } => {
                v.iter().fold(0.0f64, |acc, x| acc.max(x.abs())).min(clip)
            }
            PathFunctional::ClippedIntegral { clip } => {
                let m = v.len() - 1;
                let inner: f64 = v[1..m].iter().sum();
                let area = (0.5 * (v[0] + v[m]) + inner) / m as f64;
                area.clamp(-clip, clip)
            }
            PathFunctional::SoftBarrier { c1, c2, width } => {
                let margin = v
                    .iter()
                    .fold(f64::INFINITY, |acc, &x| acc.min(x - c1).min(c2 - x));
                (margin / width).clamp(0.0, 1.0)
            }
            PathFunctional::BarrierIndicator { c1, c2 } => {
                if v.iter().all(|&x| c1 <= x && x <= c2) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

fn check_barrier(c1: f64, c2: f64) -> Result<()> {
    if !(c1 < 0.0) {
        return Err(Error::OutOfRange {
            name: "c1".into(),
            value: c1,
            reason: "barrier needs c1 < 0",
        });
    }
    if !(c2 > 0.0) {
        return Err(Error::OutOfRange {
            name: "c2".into(),
            value: c2,
            reason: "barrier needs c2 > 0",
        });
    }
    Ok(())
}

/// Wire form `{kind, K, L, params}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct Descriptor {
    kind: FunctionalKind,
    #[serde(rename = "K", default)]
    k: Option<f64>,
    #[serde(rename = "L", default)]
    l: Option<f64>,
    #[serde(default)]
    params: BTreeMap<String, f64>,
}

impl From<PathFunctional> for Descriptor {
    fn from(f: PathFunctional) -> Self {
        let mut params = BTreeMap::new();
        match f {
            PathFunctional::SoftBarrier { c1, c2, width } => {
                params.insert("c1".into(), c1);
                params.insert("c2".into(), c2);
                params.insert("width".into(), width);
            }
            PathFunctional::BarrierIndicator { c1, c2 } => {
                params.insert("c1".into(), c1);
                params.insert("c2".into(), c2);
            }
            _ => {}
        }
        Descriptor {
            kind: f.kind(),
            k: f.lipschitz(),
            l: Some(f.bound()),
            params,
        }
    }
}

impl TryFrom<Descriptor> for PathFunctional {
    type Error = Error;

    fn try_from(d: Descriptor) -> Result<Self> {
        let allowed: &[&str] = match d.kind {
            FunctionalKind::SoftBarrier => &["c1", "c2", "width"],
            FunctionalKind::BarrierIndicator => &["c1", "c2"],
            _ => &[],
        };
        if let Some(k) = d.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::UnknownParameter(k.clone()));
        }
        let get = |name: &str| {
            d.params
                .get(name)
                .copied()
                .ok_or_else(|| Error::MissingParameter(name.to_string()))
        };
        let clip = || d.l.ok_or_else(|| Error::MissingParameter("L".into()));
        let f = match d.kind {
            FunctionalKind::ClippedEndpoint => PathFunctional::ClippedEndpoint { clip: clip()? },
            FunctionalKind::ClippedRunningMax => {
                PathFunctional::ClippedRunningMax { clip: clip()? }
            }
            FunctionalKind::ClippedAbsMax => PathFunctional::ClippedAbsMax { clip: clip()? },
            FunctionalKind::ClippedIntegral => PathFunctional::ClippedIntegral { clip: clip()? },
            FunctionalKind::SoftBarrier => PathFunctional::SoftBarrier {
                c1: get("c1")?,
                c2: get("c2")?,
                width: get("width")?,
            },
            FunctionalKind::BarrierIndicator => PathFunctional::BarrierIndicator {
                c1: get("c1")?,
                c2: get("c2")?,
            },
        };
        f.validate()?;
        if let (Some(k), Some(expected)) = (d.k, f.lipschitz()) {
            if (k - expected).abs() > 1e-12 * expected {
                return Err(Error::OutOfRange {
                    name: "K".into(),
                    value: k,
                    reason: "does not match the catalog constant for this kind",
                });
            }
        }
        if let Some(l) = d.l {
            if (l - f.bound()).abs() > 0.0 {
                return Err(Error::OutOfRange {
                    name: "L".into(),
                    value: l,
                    reason: "barrier kinds are bounded by 1",
                });
            }
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub trials: usize,
    pub max_ratio: f64,
    pub max_abs: f64,
    pub lipschitz: f64,
    pub bound: f64,
}

/// Probe `f` on random pairs of piecewise-linear paths and check the declared
/// constants. Pairs mix small and large perturbations on random meshes so
/// that kinks of the functional are hit.
pub fn lipschitz_selfcheck(
    f: &PathFunctional,
    trials: usize,
    seed: Seed,
) -> Result<LipschitzReport> {
    let lipschitz = f.lipschitz().ok_or(Error::NonLipschitz {
        kind: f.kind().name(),
    })?;
    let bound = f.bound();
    let mut rng = seed.rng();
    let mut max_ratio = 0.0f64;
    let mut max_abs = 0.0f64;
    for _ in 0..trials {
        let mesh = rng.random_range(1..=32usize);
        let spread: f64 = [0.1, 1.0, 3.0][rng.random_range(0..3usize)];
        let eps: f64 = [1e-6, 1e-3, 0.1, 1.0][rng.random_range(0..4usize)];
        let mut x = Vec::with_capacity(mesh + 1);
        let mut level = 0.0;
        x.push(0.0);
        for _ in 0..mesh {
            let z: f64 = StandardNormal.sample(&mut rng);
            level += spread * z;
            x.push(level);
        }
        let y: Vec<f64> = x
            .iter()
            .map(|&v| v + eps * (2.0 * rng.random::<f64>() - 1.0))
            .collect();
        let (fx, fy) = (f.evaluate_vertices(&x), f.evaluate_vertices(&y));
        for (v, path) in [(fx, &x), (fy, &y)] {
            if v.abs() > bound {
                return Err(Error::BoundViolation {
                    value: v.abs(),
                    bound,
                    x: path.clone(),
                });
            }
            max_abs = max_abs.max(v.abs());
        }
        let dist = x
            .iter()
            .zip(&y)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
        if dist == 0.0 {
            continue;
        }
        let ratio = (fx - fy).abs() / dist;
        if ratio > lipschitz * (1.0 + 1e-9) {
            return Err(Error::LipschitzViolation {
                ratio,
                lipschitz,
                x,
                y,
            });
        }
        max_ratio = max_ratio.max(ratio);
    }
    Ok(LipschitzReport {
        trials,
        max_ratio,
        max_abs,
        lipschitz,
        bound,
    })
}

/// Monte Carlo estimate of `P_μ(∀ i ≤ n: S_i/√n ∈ [c1, c2])` under a fixed
/// environment, with its standard error. The event is checked at the lattice
/// points only.
pub fn barrier_probability(
    env: &EnvRealization,
    c1: f64,
    c2: f64,
    inner: usize,
    seed: Seed,
) -> Result<(f64, f64)> {
    let f = PathFunctional::barrier_indicator(c1, c2)?;
    quenched_expectation(env, &f, inner, seed)
}
