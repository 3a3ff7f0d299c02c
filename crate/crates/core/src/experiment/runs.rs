//! The experiments behind the CLI subcommands.
//!
//! Stream layout under `Seed::new(master_seed)`: the limit law draws from
//! `"limit"`, the law `F_n` at size `n` from `"n"/n`, the direct matched
//! construction from `"matched"/n`, the nested environment of the
//! almost-sure track from `"as"/"env"` with walks `"as"/"walk"/n`, and the
//! direct `E f(B)` reference from `"reference"`.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::output::{write_json, write_sample, RowWriter};
use crate::env_models::{
    env_moments, normalize_spec, sample_environment, EnvRealization, EnvironmentSpec, Family,
    MomentReport,
};
use crate::error::{Error, Result};
use crate::functionals::PathFunctional;
use crate::limit_law::{brownian_expectation, sample_f};
use crate::metrics::{
    check_assumptions, dkw_band, fit_rate, ks_distance, levy_distance, prokhorov_bounds,
    reference_a, AssumptionReport, DistMeta, EmpiricalDist, RateFit, RateSchedule,
};
use crate::quenched_walk::{quenched_expectation, sample_fn};
use crate::rng::Seed;

pub const DISTANCE_COLUMNS: [&str; 9] = [
    "n",
    "ks",
    "levy",
    "prokhorov_lo",
    "prokhorov_hi",
    "dkw_eps",
    "y_n",
    "r_n",
    "max_inner_stderr",
];

/// One row of `distances.csv`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceRow {
    pub n: usize,
    pub ks: f64,
    pub levy: f64,
    pub prokhorov_lo: f64,
    pub prokhorov_hi: f64,
    /// DKW half-width of one sample of size `outer`.
    pub dkw_eps: f64,
    pub y_n: f64,
    pub r_n: f64,
    pub max_inner_stderr: f64,
}

impl DistanceRow {
    fn cells(&self) -> [String; 9] {
        [
            self.n.to_string(),
            self.ks.to_string(),
            self.levy.to_string(),
            self.prokhorov_lo.to_string(),
            self.prokhorov_hi.to_string(),
            self.dkw_eps.to_string(),
            self.y_n.to_string(),
            self.r_n.to_string(),
            self.max_inner_stderr.to_string(),
        ]
    }
}

/// All distances between two samples, labelled with size `n`.
pub fn compare_samples(
    n: usize,
    p: &EmpiricalDist,
    q: &EmpiricalDist,
    sched: &RateSchedule,
    delta: f64,
) -> Result<DistanceRow> {
    let (prokhorov_lo, prokhorov_hi) = prokhorov_bounds(p, q)?;
    let noise = |d: &EmpiricalDist| d.meta().map_or(0.0, |m| m.max_inner_stderr);
    Ok(DistanceRow {
        n,
        ks: ks_distance(p, q),
        levy: levy_distance(p, q),
        prokhorov_lo,
        prokhorov_hi,
        dkw_eps: dkw_band(p.len().min(q.len()), delta),
        y_n: sched.y_n(n),
        r_n: sched.r_n(n),
        max_inner_stderr: noise(p).max(noise(q)),
    })
}

/// Number of steps along `ks` that increase by more than the matching band.
pub fn trend_violations(ks: &[f64], eps: &[f64]) -> usize {
    ks.windows(2)
        .zip(&eps[1..])
        .filter(|(w, e)| w[1] > w[0] + **e)
        .count()
}

/// Normalized spec, its moments, `σ` and the resolved schedule.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub spec: EnvironmentSpec,
    pub moments: MomentReport,
    pub sigma: f64,
    pub schedule: RateSchedule,
}

pub fn prepare(cfg: &ExperimentConfig) -> Result<Prepared> {
    cfg.validate()?;
    let spec = normalize_spec(&cfg.spec)?;
    let moments = env_moments(&spec, cfg.alpha, cfg.beta1, cfg.beta2, cfg.beta3)?;
    let schedule = cfg.schedule.resolve(
        cfg.alpha,
        cfg.beta1,
        cfg.beta2,
        cfg.beta3,
        moments.zeta_mean.value,
    );
    Ok(Prepared {
        sigma: moments.sigma2.value.sqrt(),
        spec,
        moments,
        schedule,
    })
}

fn root(cfg: &ExperimentConfig) -> Seed {
    Seed::new(cfg.master_seed)
}

fn fn_seed(cfg: &ExperimentConfig, n: usize) -> Seed {
    root(cfg).child("n").index(n as u64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSummary {
    pub experiment: String,
    pub experiment_id: String,
    pub master_seed: u64,
    pub family: Family,
    pub functional: PathFunctional,
    pub sigma2: f64,
    pub zeta_mean: f64,
    pub rows: Vec<DistanceRow>,
    /// Fit of KS against `ln n`, with the envelope constant against `a_n`.
    pub fit: Option<RateFit>,
    /// Envelope constant against `n^{−1/4}(ln n)^{3/4}`.
    pub envelope_reference: Option<f64>,
    pub trend_violations: usize,
    pub trend_ok: bool,
    pub final_ks: f64,
    pub final_ks_ok: bool,
    pub slope_ok: Option<bool>,
    pub schedule_violations: Vec<String>,
    pub max_inner_stderr: f64,
    pub inner_noise_flag: bool,
    pub passed: bool,
}

/// `F_n` at each `n` against one sample of the limit law `F`. Rows of
/// `distances.csv` are written as they are computed.
pub fn run_convergence(cfg: &ExperimentConfig) -> Result<ConvergenceSummary> {
    let prep = prepare(cfg)?;
    let out = &cfg.output_dir;
    let limit = sample_f(
        &cfg.functional,
        prep.sigma,
        cfg.outer,
        cfg.inner,
        cfg.mesh,
        root(cfg).child("limit"),
    )?;
    let mut csv = RowWriter::create(&out.join("distances.csv"), &DISTANCE_COLUMNS)?;
    let mut rows = Vec::with_capacity(cfg.n_list.len());
    for &n in &cfg.n_list {
        let fn_law = sample_fn(
            &prep.spec,
            &cfg.functional,
            n,
            cfg.outer,
            cfg.inner,
            fn_seed(cfg, n),
        )?;
        let row = compare_samples(n, &fn_law, &limit, &prep.schedule, cfg.dkw_delta)?;
        csv.write_row(&row.cells())?;
        rows.push(row);
    }

    let ks: Vec<f64> = rows.iter().map(|r| r.ks).collect();
    let eps: Vec<f64> = rows.iter().map(|r| r.dkw_eps).collect();
    let a_n: Vec<f64> = cfg.n_list.iter().map(|&n| prep.schedule.a_n(n)).collect();
    let reference: Vec<f64> = cfg.n_list.iter().map(|&n| reference_a(n as f64)).collect();
    let fit = fit_rate(&cfg.n_list, &ks, Some(&a_n)).ok();
    let envelope_reference = fit_rate(&cfg.n_list, &ks, Some(&reference))
        .ok()
        .and_then(|f| f.envelope);
    let violations = trend_violations(&ks, &eps);
    let final_ks = *ks.last().unwrap();
    let slope_ok = cfg.slope_max.map(|max| fit.is_some_and(|f| f.slope <= max));
    let max_inner_stderr = rows.iter().fold(0.0f64, |m, r| m.max(r.max_inner_stderr));
    let summary = ConvergenceSummary {
        experiment: "convergence".into(),
        experiment_id: cfg.experiment_id.clone(),
        master_seed: cfg.master_seed,
        family: prep.spec.family(),
        functional: cfg.functional,
        sigma2: prep.moments.sigma2.value,
        zeta_mean: prep.moments.zeta_mean.value,
        fit,
        envelope_reference,
        trend_violations: violations,
        trend_ok: violations <= 1,
        final_ks,
        final_ks_ok: final_ks <= cfg.ks_threshold,
        slope_ok,
        schedule_violations: prep.schedule.violations(&cfg.n_list),
        max_inner_stderr,
        inner_noise_flag: cfg.inner_noise_factor * max_inner_stderr > cfg.target_distance,
        passed: violations <= 1 && final_ks <= cfg.ks_threshold && slope_ok != Some(false),
        rows,
    };
    write_json(&out.join("summary.json"), &summary)?;
    Ok(summary)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchedSummary {
    pub experiment: String,
    pub experiment_id: String,
    pub master_seed: u64,
    pub functional: PathFunctional,
    pub sigma1: f64,
    pub sigma2: f64,
    pub rows: Vec<DistanceRow>,
    pub threshold: f64,
    pub max_ks: f64,
    pub inner_noise_flag: bool,
    pub passed: bool,
}

/// The direct construction `E(f(σ2·B_(n) + σ1·W_(n)) | W_(n))` for a
/// normalized bio-normal spec: Gaussian-walk broken lines with `n` steps.
/// Normalization makes `σ2 = 1`, so this is the limit-law sampler on mesh `n`.
pub fn sample_matched(
    spec: &EnvironmentSpec,
    f: &PathFunctional,
    n: usize,
    outer: usize,
    inner: usize,
    seed: Seed,
) -> Result<EmpiricalDist> {
    if spec.family() != Family::BioNormal {
        return Err(Error::NotBioNormal(spec.family().name().into()));
    }
    if !spec.is_normalized() {
        return Err(Error::NotNormalized);
    }
    debug_assert!((spec.param("sigma2") - 1.0).abs() < 1e-12);
    let d = sample_f(f, spec.param("sigma1"), outer, inner, n, seed)?;
    let meta = DistMeta {
        n: Some(n),
        sigma: None,
        mesh: None,
        ..d.meta().cloned().expect("sampler sets meta")
    };
    EmpiricalDist::with_meta(d.values().to_vec(), meta)
}

/// Environment simulation against the direct bio-normal construction at
/// each `n`; both sides are exact in law, so KS only reflects sampling noise.
pub fn run_matched_law(cfg: &ExperimentConfig) -> Result<MatchedSummary> {
    if cfg.spec.family() != Family::BioNormal {
        return Err(Error::NotBioNormal(cfg.spec.family().name().into()));
    }
    let prep = prepare(cfg)?;
    let out = &cfg.output_dir;
    let mut csv = RowWriter::create(&out.join("distances.csv"), &DISTANCE_COLUMNS)?;
    let mut rows = Vec::with_capacity(cfg.n_list.len());
    for &n in &cfg.n_list {
        let env_side = sample_fn(
            &prep.spec,
            &cfg.functional,
            n,
            cfg.outer,
            cfg.inner,
            fn_seed(cfg, n),
        )?;
        let direct = sample_matched(
            &prep.spec,
            &cfg.functional,
            n,
            cfg.outer,
            cfg.inner,
            root(cfg).child("matched").index(n as u64),
        )?;
        let row = compare_samples(n, &env_side, &direct, &prep.schedule, cfg.dkw_delta)?;
        csv.write_row(&row.cells())?;
        rows.push(row);
    }
    let max_ks = rows.iter().fold(0.0f64, |m, r| m.max(r.ks));
    let max_inner_stderr = rows.iter().fold(0.0f64, |m, r| m.max(r.max_inner_stderr));
    let summary = MatchedSummary {
        experiment: "matched_law".into(),
        experiment_id: cfg.experiment_id.clone(),
        master_seed: cfg.master_seed,
        functional: cfg.functional,
        sigma1: prep.spec.param("sigma1"),
        sigma2: prep.spec.param("sigma2"),
        threshold: cfg.matched_threshold,
        max_ks,
        inner_noise_flag: cfg.inner_noise_factor * max_inner_stderr > cfg.target_distance,
        passed: max_ks <= cfg.matched_threshold,
        rows,
    };
    write_json(&out.join("summary.json"), &summary)?;
    Ok(summary)
}

/// `E_μ f(S_(n))` along one environment, and its distance to a reference.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsPoint {
    pub n: usize,
    pub estimate: f64,
    pub stderr: f64,
    pub deviation: f64,
}

/// Track `E_μ f(S_(n))` for the prefixes `env[..n]`, `n ∈ ns`, of one nested
/// environment. Walks at size `n` use stream `seed/n`.
pub fn as_track(
    env: &EnvRealization,
    f: &PathFunctional,
    ns: &[usize],
    inner: usize,
    seed: Seed,
    reference: f64,
) -> Result<Vec<AsPoint>> {
    ns.iter()
        .map(|&n| {
            if n > env.len() {
                return Err(Error::OutOfRange {
                    name: "n".into(),
                    value: n as f64,
                    reason: "exceeds the environment length",
                });
            }
            let (estimate, stderr) =
                quenched_expectation(&env.prefix(n), f, inner, seed.index(n as u64))?;
            Ok(AsPoint {
                n,
                estimate,
                stderr,
                deviation: (estimate - reference).abs(),
            })
        })
        .collect()
}

/// Sup of the deviations over the larger half of the track.
pub fn tail_sup_deviation(points: &[AsPoint]) -> f64 {
    points[points.len() / 2..]
        .iter()
        .fold(0.0f64, |m, p| m.max(p.deviation))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsSummary {
    pub experiment: String,
    pub experiment_id: String,
    pub master_seed: u64,
    pub functional: PathFunctional,
    pub reference: f64,
    pub reference_stderr: f64,
    pub points: Vec<AsPoint>,
    pub sup_deviation_tail: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Almost-sure track for a degenerate limit (`σ = 0`).
pub fn run_as_convergence(cfg: &ExperimentConfig) -> Result<AsSummary> {
    let prep = prepare(cfg)?;
    if prep.moments.sigma2.value > 0.0 {
        return Err(Error::SigmaNonzero(prep.moments.sigma2.value));
    }
    let n_max = *cfg.n_list.last().unwrap();
    let base = root(cfg).child("as");
    let env = sample_environment(&prep.spec, n_max, base.child("env"))?;
    let (reference, reference_stderr) = brownian_expectation(
        &cfg.functional,
        cfg.mesh,
        cfg.reference_replicas(),
        root(cfg).child("reference"),
    )?;
    let points = as_track(
        &env,
        &cfg.functional,
        &cfg.n_list,
        cfg.inner,
        base.child("walk"),
        reference,
    )?;
    let mut csv = RowWriter::create(
        &cfg.output_dir.join("as_track.csv"),
        &["n", "estimate", "stderr", "deviation"],
    )?;
    for p in &points {
        csv.write_row(&[
            p.n.to_string(),
            p.estimate.to_string(),
            p.stderr.to_string(),
            p.deviation.to_string(),
        ])?;
    }
    let sup = tail_sup_deviation(&points);
    let summary = AsSummary {
        experiment: "as_convergence".into(),
        experiment_id: cfg.experiment_id.clone(),
        master_seed: cfg.master_seed,
        functional: cfg.functional,
        reference,
        reference_stderr,
        points,
        sup_deviation_tail: sup,
        threshold: cfg.as_threshold,
        passed: sup <= cfg.as_threshold,
    };
    write_json(&cfg.output_dir.join("summary.json"), &summary)?;
    Ok(summary)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssumptionSummary {
    pub experiment: String,
    pub experiment_id: String,
    #[serde(flatten)]
    pub report: AssumptionReport,
}

pub fn run_assumption_report(cfg: &ExperimentConfig) -> Result<AssumptionSummary> {
    let prep = prepare(cfg)?;
    let report = check_assumptions(
        &prep.spec,
        cfg.alpha,
        cfg.beta1,
        cfg.beta2,
        cfg.beta3,
        &prep.schedule,
        &cfg.n_list,
    )?;
    let summary = AssumptionSummary {
        experiment: "assumptions".into(),
        experiment_id: cfg.experiment_id.clone(),
        report,
    };
    write_json(&cfg.output_dir.join("summary.json"), &summary)?;
    Ok(summary)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub experiment: String,
    pub experiment_id: String,
    pub files: Vec<PathBuf>,
    pub samples: Vec<DistMeta>,
}

/// Write the sample of `F_n` for each `n` to `fn_<n>.csv`.
pub fn run_simulate(cfg: &ExperimentConfig) -> Result<SampleSummary> {
    let prep = prepare(cfg)?;
    let mut files = Vec::new();
    let mut samples = Vec::new();
    for &n in &cfg.n_list {
        let d = sample_fn(
            &prep.spec,
            &cfg.functional,
            n,
            cfg.outer,
            cfg.inner,
            fn_seed(cfg, n),
        )?;
        let name = PathBuf::from(format!("fn_{n}.csv"));
        write_sample(&cfg.output_dir.join(&name), &d)?;
        files.push(name);
        samples.push(d.meta().cloned().expect("sampler sets meta"));
    }
    let summary = SampleSummary {
        experiment: "simulate".into(),
        experiment_id: cfg.experiment_id.clone(),
        files,
        samples,
    };
    write_json(&cfg.output_dir.join("summary.json"), &summary)?;
    Ok(summary)
}

/// Write the sample of the limit law `F` to `limit.csv`.
pub fn run_limit(cfg: &ExperimentConfig) -> Result<SampleSummary> {
    let prep = prepare(cfg)?;
    let d = sample_f(
        &cfg.functional,
        prep.sigma,
        cfg.outer,
        cfg.inner,
        cfg.mesh,
        root(cfg).child("limit"),
    )?;
    let name = PathBuf::from("limit.csv");
    write_sample(&cfg.output_dir.join(&name), &d)?;
    let summary = SampleSummary {
        experiment: "limit".into(),
        experiment_id: cfg.experiment_id.clone(),
        files: vec![name],
        samples: vec![d.meta().cloned().expect("sampler sets meta")],
    };
    write_json(&cfg.output_dir.join("summary.json"), &summary)?;
    Ok(summary)
}
