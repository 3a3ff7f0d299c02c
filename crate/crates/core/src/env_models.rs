//! Parametric families of i.i.d. time-random environments.
//!
//! An [`EnvironmentSpec`] describes the law of the random step distribution
//! `μ_1`; [`sample_environment`] draws a concrete [`EnvRealization`]
//! `μ_1..μ_n` from it. Each realized step is a [`StepDistribution`] with exact
//! access to its mean, variance and absolute central moments, which is what
//! the quenched statistics `M_n`, `η_n`, `ζ_n` are built from.
//!
//! Four families are provided:
//!
//! | family              | quenched mean `m_i`            | step law given `μ_i`              |
//! |---------------------|--------------------------------|-----------------------------------|
//! | `bio_normal`        | `N(mean, sigma1²)`             | `N(m_i, sigma2²)`                 |
//! | `bernoulli_bias`    | `offset + step(2p_i − 1)`      | `offset ± step`, `P(+) = p_i ~ Beta(beta_a, beta_b)` |
//! | `rademacher_scale`  | `N(mean, mean_sd²)`            | `m_i ± c_i`, `c_i ~ U[scale_lo, scale_hi]` |
//! | `heavy_tail_pareto` | `U[mean − mean_bound, mean + mean_bound]` | `m_i + tail_scale·R·P`, `P ~ Pareto(1, tail_exponent)` |
//!
//! In `heavy_tail_pareto`, `R` is a random sign, so the fluctuation has a
//! symmetric power tail of exponent `tail_exponent` and the same law in every
//! environment. Moments of order at or above the exponent are infinite.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Beta, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::beta::ln_beta;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::rng::{Seed, StreamRng};
use crate::stats::mean_and_stderr;

/// Tolerance on `|E(M_1)|` and `|E(η_1) − 1|` for closed-form families.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Number of environment draws used by the Monte Carlo moment oracle.
pub const ORACLE_DRAWS: usize = 1_000_000;

const ORACLE_MASTER_SEED: u64 = 0x6d6f_6d65_6e74;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    BioNormal,
    BernoulliBias,
    RademacherScale,
    HeavyTailPareto,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::BioNormal,
        Family::BernoulliBias,
        Family::RademacherScale,
        Family::HeavyTailPareto,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::BioNormal => "bio_normal",
            Family::BernoulliBias => "bernoulli_bias",
            Family::RademacherScale => "rademacher_scale",
            Family::HeavyTailPareto => "heavy_tail_pareto",
        }
    }

    // (name, default); `None` means required.
    fn parameters(self) -> &'static [(&'static str, Option<f64>)] {
        match self {
            Family::BioNormal => &[("sigma1", None), ("sigma2", None), ("mean", Some(0.0))],
            Family::BernoulliBias => &[
                ("beta_a", None),
                ("beta_b", None),
                ("step", Some(1.0)),
                ("offset", Some(0.0)),
            ],
            Family::RademacherScale => &[
                ("mean_sd", None),
                ("scale_lo", None),
                ("scale_hi", None),
                ("mean", Some(0.0)),
            ],
            Family::HeavyTailPareto => &[
                ("tail_exponent", None),
                ("mean_bound", Some(0.5)),
                ("tail_scale", Some(1.0)),
                ("mean", Some(0.0)),
            ],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// Increment transform `x ↦ scale·(x − shift)` applied by normalization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub shift: f64,
    pub scale: f64,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap {
        shift: 0.0,
        scale: 1.0,
    };

    /// `next ∘ self`.
    pub fn then(self, next: AffineMap) -> AffineMap {
        AffineMap {
            shift: self.shift + next.shift / self.scale,
            scale: self.scale * next.scale,
        }
    }

    pub fn apply(self, x: f64) -> f64 {
        self.scale * (x - self.shift)
    }
}

impl Default for AffineMap {
    fn default() -> Self {
        AffineMap::IDENTITY
    }
}

/// Law of the random step distribution `μ_1`.
///
/// Parameters are stored complete (defaults filled in), and any normalization
/// applied so far is folded into them; `affine_map` keeps the cumulative
/// transform for provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct EnvironmentSpec {
    family: Family,
    params: BTreeMap<String, f64>,
    normalized: bool,
    affine_map: AffineMap,
}

#[derive(Deserialize)]
struct RawSpec {
    family: Family,
    params: BTreeMap<String, f64>,
    #[serde(default)]
    normalized: bool,
    #[serde(default)]
    affine_map: AffineMap,
}

impl TryFrom<RawSpec> for EnvironmentSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        let mut spec = make_environment_spec(raw.family, raw.params)?;
        spec.affine_map = raw.affine_map;
        if raw.normalized {
            let (m, eta) = (spec.mean_m(), spec.mean_eta());
            if m.abs() > NORMALIZATION_TOL || (eta - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::OutOfRange {
                    name: "normalized".into(),
                    value: 1.0,
                    reason: "spec is flagged normalized but E(M_1) != 0 or E(eta_1) != 1",
                });
            }
            spec.normalized = true;
        }
        Ok(spec)
    }
}

/// Validate parameters for `family` and build an unnormalized spec.
pub fn make_environment_spec(
    family: Family,
    params: BTreeMap<String, f64>,
) -> Result<EnvironmentSpec> {
    let table = family.parameters();
    if let Some(unknown) = params.keys().find(|k| !table.iter().any(|(n, _)| n == k)) {
        return Err(Error::UnknownParameter(unknown.clone()));
    }
    let mut full = BTreeMap::new();
    for &(name, default) in table {
        let value = match (params.get(name), default) {
            (Some(&v), _) => v,
            (None, Some(d)) => d,
            (None, None) => return Err(Error::MissingParameter(name.into())),
        };
        if !value.is_finite() {
            return Err(out_of_range(name, value, "must be finite"));
        }
        full.insert(name.to_string(), value);
    }
    let spec = EnvironmentSpec {
        family,
        params: full,
        normalized: false,
        affine_map: AffineMap::IDENTITY,
    };
    spec.check_ranges()?;
    Ok(spec)
}

fn out_of_range(name: &str, value: f64, reason: &'static str) -> Error {
    Error::OutOfRange {
        name: name.to_string(),
        value,
        reason,
    }
}

impl EnvironmentSpec {
    /// Convenience constructor from `(name, value)` pairs.
    pub fn new(family: Family, params: &[(&str, f64)]) -> Result<Self> {
        make_environment_spec(
            family,
            params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        )
    }

    pub fn bio_normal(sigma1: f64, sigma2: f64) -> Result<Self> {
        Self::new(Family::BioNormal, &[("sigma1", sigma1), ("sigma2", sigma2)])
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn param(&self, name: &str) -> f64 {
        self.params[name]
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn affine_map(&self) -> AffineMap {
        self.affine_map
    }

    fn check_ranges(&self) -> Result<()> {
        let p = |n: &str| self.params[n];
        let nonneg = |n: &'static str| {
            if p(n) < 0.0 {
                Err(out_of_range(n, p(n), "must be >= 0"))
            } else {
                Ok(())
            }
        };
        let positive = |n: &'static str| {
            if p(n) <= 0.0 {
                Err(out_of_range(n, p(n), "must be > 0"))
            } else {
                Ok(())
            }
        };
        match self.family {
            Family::BioNormal => {
                nonneg("sigma1")?;
                positive("sigma2")?;
            }
            Family::BernoulliBias => {
                positive("beta_a")?;
                positive("beta_b")?;
                positive("step")?;
            }
            Family::RademacherScale => {
                nonneg("mean_sd")?;
                nonneg("scale_lo")?;
                if p("scale_hi") < p("scale_lo") {
                    return Err(out_of_range(
                        "scale_hi",
                        p("scale_hi"),
                        "must be >= scale_lo",
                    ));
                }
            }
            Family::HeavyTailPareto => {
                if p("tail_exponent") <= 2.0 {
                    return Err(out_of_range(
                        "tail_exponent",
                        p("tail_exponent"),
                        "must be > 2 for a finite quenched variance",
                    ));
                }
                nonneg("mean_bound")?;
                positive("tail_scale")?;
            }
        }
        Ok(())
    }

    /// `E(M_1)` in closed form.
    pub fn mean_m(&self) -> f64 {
        let p = |n: &str| self.params[n];
        match self.family {
            Family::BioNormal | Family::RademacherScale | Family::HeavyTailPareto => p("mean"),
            Family::BernoulliBias => {
                let (a, b) = (p("beta_a"), p("beta_b"));
                p("offset") + p("step") * (a - b) / (a + b)
            }
        }
    }

    /// `E(η_1)` in closed form.
    pub fn mean_eta(&self) -> f64 {
        let p = |n: &str| self.params[n];
        match self.family {
            Family::BioNormal => p("sigma2").powi(2),
            Family::BernoulliBias => {
                let (a, b, s) = (p("beta_a"), p("beta_b"), p("step"));
                4.0 * s * s * a * b / ((a + b) * (a + b + 1.0))
            }
            Family::RademacherScale => {
                let (lo, hi) = (p("scale_lo"), p("scale_hi"));
                (lo * lo + lo * hi + hi * hi) / 3.0
            }
            Family::HeavyTailPareto => {
                let t = p("tail_exponent");
                p("tail_scale").powi(2) * t / (t - 2.0)
            }
        }
    }

    /// `σ² = E(M_1²)` in closed form.
    pub fn sigma2(&self) -> f64 {
        let p = |n: &str| self.params[n];
        let m = self.mean_m();
        match self.family {
            Family::BioNormal => p("sigma1").powi(2) + m * m,
            Family::BernoulliBias => {
                let (a, b, s) = (p("beta_a"), p("beta_b"), p("step"));
                let var = s * s * 4.0 * a * b / ((a + b).powi(2) * (a + b + 1.0));
                var + m * m
            }
            Family::RademacherScale => p("mean_sd").powi(2) + m * m,
            Family::HeavyTailPareto => p("mean_bound").powi(2) / 3.0 + m * m,
        }
    }

    fn rescaled(&self, map: AffineMap) -> EnvironmentSpec {
        let mut params = self.params.clone();
        let k = map.scale;
        let mut set = |name: &str, f: &dyn Fn(f64) -> f64| {
            let v = params[name];
            params.insert(name.to_string(), f(v));
        };
        match self.family {
            Family::BioNormal => {
                set("mean", &|v| map.apply(v));
                set("sigma1", &|v| k * v);
                set("sigma2", &|v| k * v);
            }
            Family::BernoulliBias => {
                set("offset", &|v| map.apply(v));
                set("step", &|v| k * v);
            }
            Family::RademacherScale => {
                set("mean", &|v| map.apply(v));
                set("mean_sd", &|v| k * v);
                set("scale_lo", &|v| k * v);
                set("scale_hi", &|v| k * v);
            }
            Family::HeavyTailPareto => {
                set("mean", &|v| map.apply(v));
                set("mean_bound", &|v| k * v);
                set("tail_scale", &|v| k * v);
            }
        }
        EnvironmentSpec {
            family: self.family,
            params,
            normalized: true,
            affine_map: self.affine_map.then(map),
        }
    }

    /// Draw one step law `μ_i` from the environment law.
    pub fn draw_step<R: Rng + ?Sized>(&self, rng: &mut R) -> StepDistribution {
        let p = |n: &str| self.params[n];
        match self.family {
            Family::BioNormal => {
                let z: f64 = StandardNormal.sample(rng);
                StepDistribution::Normal {
                    mean: p("mean") + p("sigma1") * z,
                    sd: p("sigma2"),
                }
            }
            Family::BernoulliBias => {
                // parameters were validated positive
                let prob = Beta::new(p("beta_a"), p("beta_b"))
                    .expect("validated beta parameters")
                    .sample(rng);
                let (offset, step) = (p("offset"), p("step"));
                StepDistribution::TwoPoint {
                    low: offset - step,
                    high: offset + step,
                    p_high: prob,
                }
            }
            Family::RademacherScale => {
                let z: f64 = StandardNormal.sample(rng);
                let m = p("mean") + p("mean_sd") * z;
                let (lo, hi) = (p("scale_lo"), p("scale_hi"));
                let u: f64 = rng.random();
                let c = lo + (hi - lo) * u;
                StepDistribution::TwoPoint {
                    low: m - c,
                    high: m + c,
                    p_high: 0.5,
                }
            }
            Family::HeavyTailPareto => {
                let u: f64 = rng.random();
                StepDistribution::SymmetricPareto {
                    center: p("mean") + p("mean_bound") * (2.0 * u - 1.0),
                    scale: p("tail_scale"),
                    tail: p("tail_exponent"),
                }
            }
        }
    }
}

impl fmt::Display for EnvironmentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.family)?;
        for (i, (k, v)) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str(")")
    }
}

/// Shift and rescale increments so that `E(M_1) = 0` and `E(η_1) = 1`.
///
/// Already-normalized parameters come back bit-identical, which makes the
/// operation idempotent.
pub fn normalize_spec(spec: &EnvironmentSpec) -> Result<EnvironmentSpec> {
    let eta = spec.mean_eta();
    if eta <= 0.0 {
        return Err(Error::DegenerateFluctuation);
    }
    let shift = spec.mean_m();
    let scale = eta.sqrt().recip();
    if shift.abs() <= NORMALIZATION_TOL && (scale - 1.0).abs() <= NORMALIZATION_TOL {
        let mut out = spec.clone();
        out.normalized = true;
        return Ok(out);
    }
    Ok(spec.rescaled(AffineMap { shift, scale }))
}

/// One concrete step law on the reals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepDistribution {
    PointMass {
        value: f64,
    },
    Normal {
        mean: f64,
        sd: f64,
    },
    /// `high` with probability `p_high`, else `low`.
    TwoPoint {
        low: f64,
        high: f64,
        p_high: f64,
    },
    /// `center + scale·R·P` with `R` a fair sign and `P ~ Pareto(1, tail)`.
    SymmetricPareto {
        center: f64,
        scale: f64,
        tail: f64,
    },
}

/// `E|N(0, sd²)|^p = sd^p 2^{p/2} Γ((p+1)/2) / √π`.
pub fn gaussian_abs_moment(sd: f64, p: f64) -> f64 {
    if sd == 0.0 {
        return if p == 0.0 { 1.0 } else { 0.0 };
    }
    let ln = p * sd.ln() + 0.5 * p * std::f64::consts::LN_2 + ln_gamma(0.5 * (p + 1.0))
        - 0.5 * std::f64::consts::PI.ln();
    ln.exp()
}

impl StepDistribution {
    pub fn mean(&self) -> f64 {
        match *self {
            StepDistribution::PointMass { value } => value,
            StepDistribution::Normal { mean, .. } => mean,
            StepDistribution::TwoPoint { low, high, p_high } => low + p_high * (high - low),
            StepDistribution::SymmetricPareto { center, .. } => center,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            StepDistribution::PointMass { .. } => 0.0,
            StepDistribution::Normal { sd, .. } => sd * sd,
            StepDistribution::TwoPoint { low, high, p_high } => {
                let d = high - low;
                d * d * p_high * (1.0 - p_high)
            }
            StepDistribution::SymmetricPareto { scale, tail, .. } => {
                scale * scale * tail / (tail - 2.0)
            }
        }
    }

    /// `E|X − E X|^α`; `+∞` when the moment does not exist.
    pub fn alpha_abs_central_moment(&self, alpha: f64) -> f64 {
        if alpha == 2.0 {
            return self.variance();
        }
        match *self {
            StepDistribution::PointMass { .. } => {
                if alpha == 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            StepDistribution::Normal { sd, .. } => gaussian_abs_moment(sd, alpha),
            StepDistribution::TwoPoint { low, high, p_high } => {
                let d = high - low;
                let up = (d * (1.0 - p_high)).abs();
                let down = (d * p_high).abs();
                p_high * up.powf(alpha) + (1.0 - p_high) * down.powf(alpha)
            }
            StepDistribution::SymmetricPareto { scale, tail, .. } => {
                if alpha >= tail {
                    f64::INFINITY
                } else {
                    scale.powf(alpha) * tail / (tail - alpha)
                }
            }
        }
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            StepDistribution::PointMass { value } => value,
            StepDistribution::Normal { mean, sd } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + sd * z
            }
            StepDistribution::TwoPoint { low, high, p_high } => {
                let u: f64 = rng.random();
                if u < p_high {
                    high
                } else {
                    low
                }
            }
            StepDistribution::SymmetricPareto {
                center,
                scale,
                tail,
            } => {
                let u: f64 = rng.random();
                let magnitude = scale * (1.0 - u).powf(-1.0 / tail);
                if rng.random::<bool>() {
                    center + magnitude
                } else {
                    center - magnitude
                }
            }
        }
    }
}

/// A realized environment `μ_1..μ_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvRealization {
    steps: Vec<StepDistribution>,
    seed_trace: Option<(u64, u64)>,
}

impl EnvRealization {
    /// Build an environment by hand (test fixtures, point-mass walks).
    pub fn from_steps(steps: Vec<StepDistribution>) -> Self {
        EnvRealization {
            steps,
            seed_trace: None,
        }
    }

    pub fn steps(&self) -> &[StepDistribution] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `(master seed, stream id)` that produced this realization, if sampled.
    pub fn seed_trace(&self) -> Option<(u64, u64)> {
        self.seed_trace
    }

    /// The first `n` steps; for sampled environments this equals sampling
    /// with length `n` from the same seed.
    pub fn prefix(&self, n: usize) -> EnvRealization {
        EnvRealization {
            steps: self.steps[..n.min(self.steps.len())].to_vec(),
            seed_trace: self.seed_trace,
        }
    }
}

/// Draw `n` i.i.d. step laws from a normalized spec. Pure in `(spec, n, seed)`.
pub fn sample_environment(spec: &EnvironmentSpec, n: usize, seed: Seed) -> Result<EnvRealization> {
    if !spec.normalized {
        return Err(Error::NotNormalized);
    }
    if n == 0 {
        return Err(Error::ZeroLength("n"));
    }
    let mut rng = seed.rng();
    let steps = (0..n).map(|_| spec.draw_step(&mut rng)).collect();
    Ok(EnvRealization {
        steps,
        seed_trace: Some(seed.as_tuple()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    ClosedForm,
    Oracle,
}

/// One reported moment. Infinite moments have `finite = false` and serialize
/// their value as `null`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentValue {
    #[serde(with = "crate::serde_f64")]
    pub value: f64,
    pub finite: bool,
    pub method: MomentMethod,
    pub stderr: Option<f64>,
}

impl MomentValue {
    fn exact(value: f64) -> Self {
        MomentValue {
            value,
            finite: value.is_finite(),
            method: MomentMethod::ClosedForm,
            stderr: None,
        }
    }

    fn oracle((value, se): (f64, f64)) -> Self {
        MomentValue {
            value,
            finite: value.is_finite(),
            method: MomentMethod::Oracle,
            stderr: Some(se),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    /// `σ² = E(M_1²)`.
    pub sigma2: MomentValue,
    /// `E|M_1|^{β1}`.
    pub abs_mean_moment: MomentValue,
    /// `E(η_1^{β2})`.
    pub eta_moment: MomentValue,
    /// `E(ζ_1^{β3})` with `ζ_1 = E_μ|U_1|^α`.
    pub zeta_moment: MomentValue,
    /// `E(ζ_1)`.
    pub zeta_mean: MomentValue,
}

impl MomentReport {
    pub fn all_finite(&self) -> bool {
        self.abs_mean_moment.finite && self.eta_moment.finite && self.zeta_moment.finite
    }
}

/// Monte Carlo average of `g(μ_1)` over `draws` environment draws.
pub fn oracle_moment<G>(spec: &EnvironmentSpec, draws: usize, seed: Seed, g: G) -> (f64, f64)
where
    G: Fn(&StepDistribution) -> f64,
{
    let mut rng: StreamRng = seed.rng();
    let values: Vec<f64> = (0..draws).map(|_| g(&spec.draw_step(&mut rng))).collect();
    mean_and_stderr(&values)
}

fn oracle_seed(spec: &EnvironmentSpec, what: &str) -> Seed {
    Seed::new(ORACLE_MASTER_SEED)
        .child(spec.family.name())
        .child(what)
}

fn uniform_power_moment(lo: f64, hi: f64, q: f64) -> f64 {
    if hi == lo {
        lo.powf(q)
    } else {
        (hi.powf(q + 1.0) - lo.powf(q + 1.0)) / ((q + 1.0) * (hi - lo))
    }
}

// E|V|^q for V uniform on [lo, hi].
fn uniform_abs_moment(lo: f64, hi: f64, q: f64) -> f64 {
    if hi == lo {
        return lo.abs().powf(q);
    }
    let anti = |x: f64| x.signum() * x.abs().powf(q + 1.0) / (q + 1.0);
    (anti(hi) - anti(lo)) / (hi - lo)
}

/// Moment report for a normalized spec. Closed forms where available, the
/// Monte Carlo oracle (with standard errors) otherwise.
pub fn env_moments(
    spec: &EnvironmentSpec,
    alpha: f64,
    beta1: f64,
    beta2: f64,
    beta3: f64,
) -> Result<MomentReport> {
    if !spec.normalized {
        return Err(Error::NotNormalized);
    }
    let p = |n: &str| spec.params[n];
    let oracle = |what: &str, g: &dyn Fn(&StepDistribution) -> f64| {
        MomentValue::oracle(oracle_moment(
            spec,
            ORACLE_DRAWS,
            oracle_seed(spec, what),
            g,
        ))
    };
    let sigma2 = MomentValue::exact(spec.sigma2());
    let abs_mean = |s: &StepDistribution| s.mean().abs().powf(beta1);
    let (abs_mean_moment, eta_moment, zeta_moment, zeta_mean) = match spec.family {
        Family::BioNormal => {
            let m1 = if p("mean") == 0.0 {
                MomentValue::exact(gaussian_abs_moment(p("sigma1"), beta1))
            } else {
                oracle("abs_mean", &abs_mean)
            };
            let zeta = gaussian_abs_moment(p("sigma2"), alpha);
            (
                m1,
                MomentValue::exact(p("sigma2").powf(2.0 * beta2)),
                MomentValue::exact(zeta.powf(beta3)),
                MomentValue::exact(zeta),
            )
        }
        Family::BernoulliBias => {
            let (a, b, s) = (p("beta_a"), p("beta_b"), p("step"));
            let m1 = if beta1 == 2.0 {
                sigma2
            } else {
                oracle("abs_mean", &abs_mean)
            };
            let ln_b = ln_beta(a, b);
            let eta = (4.0 * s * s).powf(beta2) * (ln_beta(a + beta2, b + beta2) - ln_b).exp();
            let zeta_mean = (2.0 * s).powf(alpha)
                * ((ln_beta(a + 1.0, b + alpha) - ln_b).exp()
                    + (ln_beta(a + alpha, b + 1.0) - ln_b).exp());
            (
                m1,
                MomentValue::exact(eta),
                oracle("zeta", &|st| st.alpha_abs_central_moment(alpha).powf(beta3)),
                MomentValue::exact(zeta_mean),
            )
        }
        Family::RademacherScale => {
            let (lo, hi) = (p("scale_lo"), p("scale_hi"));
            let m1 = if p("mean") == 0.0 {
                MomentValue::exact(gaussian_abs_moment(p("mean_sd"), beta1))
            } else {
                oracle("abs_mean", &abs_mean)
            };
            (
                m1,
                MomentValue::exact(uniform_power_moment(lo, hi, 2.0 * beta2)),
                MomentValue::exact(uniform_power_moment(lo, hi, alpha * beta3)),
                MomentValue::exact(uniform_power_moment(lo, hi, alpha)),
            )
        }
        Family::HeavyTailPareto => {
            let (mean, bound) = (p("mean"), p("mean_bound"));
            let (t, scale) = (p("tail_exponent"), p("tail_scale"));
            let zeta = if alpha >= t {
                f64::INFINITY
            } else {
                scale.powf(alpha) * t / (t - alpha)
            };
            let eta = scale * scale * t / (t - 2.0);
            (
                MomentValue::exact(uniform_abs_moment(mean - bound, mean + bound, beta1)),
                MomentValue::exact(eta.powf(beta2)),
                MomentValue::exact(zeta.powf(beta3)),
                MomentValue::exact(zeta),
            )
        }
    };
    Ok(MomentReport {
        alpha,
        beta1,
        beta2,
        beta3,
        sigma2,
        abs_mean_moment,
        eta_moment,
        zeta_moment,
        zeta_mean,
    })
}
