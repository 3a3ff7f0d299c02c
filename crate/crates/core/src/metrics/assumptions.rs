use serde::{Deserialize, Serialize};

use super::rates::RateSchedule;
use crate::env_models::{env_moments, EnvironmentSpec, MomentReport};
use crate::error::Result;

/// The orders `(2α, α, α)` that reduce the moment hypothesis to a single
/// condition on `α`, together with the moments at those orders.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reduction {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub moments: MomentReport,
    pub all_finite: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub moments: MomentReport,
    pub moment_violations: Vec<String>,
    pub schedule_violations: Vec<String>,
    pub a_tilde: f64,
    pub reduction: Reduction,
    pub passed: bool,
}

/// Check the moment and schedule hypotheses for `spec` at the given orders.
/// Violations are collected, not returned as errors; the only error is an
/// unnormalized spec.
pub fn check_assumptions(
    spec: &EnvironmentSpec,
    alpha: f64,
    beta1: f64,
    beta2: f64,
    beta3: f64,
    sched: &RateSchedule,
    ns: &[usize],
) -> Result<AssumptionReport> {
    let moments = env_moments(spec, alpha, beta1, beta2, beta3)?;
    let mut moment_violations = Vec::new();
    if !(alpha > 2.0) {
        moment_violations.push(format!("alpha = {alpha} must exceed 2"));
    }
    for (name, m) in [
        ("E|M_1|^beta1", &moments.abs_mean_moment),
        ("E(eta_1^beta2)", &moments.eta_moment),
        ("E(zeta_1^beta3)", &moments.zeta_moment),
        ("E(zeta_1)", &moments.zeta_mean),
    ] {
        if !m.finite {
            moment_violations.push(format!("{name} is infinite"));
        }
    }

    // judge the schedule against this environment's E(zeta_1), not the one it was built with
    let mut effective = sched.clone();
    effective.zeta_mean = moments.zeta_mean.value;
    let mut schedule_violations = effective.violations(ns);
    if (sched.alpha, sched.beta1, sched.beta2, sched.beta3) != (alpha, beta1, beta2, beta3) {
        schedule_violations.push(format!(
            "schedule orders ({}, {}, {}, {}) differ from the checked orders ({alpha}, {beta1}, {beta2}, {beta3})",
            sched.alpha, sched.beta1, sched.beta2, sched.beta3
        ));
    }

    let reduced = env_moments(spec, alpha, 2.0 * alpha, alpha, alpha)?;
    let reduction = Reduction {
        beta1: 2.0 * alpha,
        beta2: alpha,
        beta3: alpha,
        all_finite: reduced.all_finite(),
        moments: reduced,
    };
    let passed = moment_violations.is_empty() && schedule_violations.is_empty();
    Ok(AssumptionReport {
        a_tilde: sched.a_tilde(ns),
        moments,
        moment_violations,
        schedule_violations,
        reduction,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env_models::{normalize_spec, Family};
    use crate::metrics::rates::Term;

    const NS: [usize; 4] = [64, 256, 1024, 4096];

    #[test]
    fn gaussian_environment_passes() {
        let spec = normalize_spec(&EnvironmentSpec::bio_normal(1.0, 1.0).unwrap()).unwrap();
        let zeta = crate::env_models::gaussian_abs_moment(1.0, 3.0);
        let sched = RateSchedule::standard(3.0, zeta);
        let r = check_assumptions(&spec, 3.0, 6.0, 3.0, 3.0, &sched, &NS).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.reduction.all_finite);
        assert_eq!(
            (r.reduction.beta1, r.reduction.beta2, r.reduction.beta3),
            (6.0, 3.0, 3.0)
        );
    }

    #[test]
    fn heavy_tail_flagged() {
        let raw = EnvironmentSpec::new(Family::HeavyTailPareto, &[("tail_exponent", 3.5)]).unwrap();
        let spec = normalize_spec(&raw).unwrap();
        let sched = RateSchedule::standard(4.0, 1.0);
        let r = check_assumptions(&spec, 4.0, 8.0, 4.0, 4.0, &sched, &NS).unwrap();
        assert!(!r.passed);
        assert!(r
            .moment_violations
            .iter()
            .any(|m| m.starts_with("E(zeta_1^beta3)")));
        assert!(!r.reduction.all_finite);
    }

    #[test]
    fn undersized_b_flagged() {
        let spec = normalize_spec(&EnvironmentSpec::bio_normal(1.0, 1.0).unwrap()).unwrap();
        let zeta = crate::env_models::gaussian_abs_moment(1.0, 3.0);
        let mut sched = RateSchedule::standard(3.0, zeta);
        sched.b = Term::new(zeta, 1.0, 0.0);
        let r = check_assumptions(&spec, 3.0, 6.0, 3.0, 3.0, &sched, &NS).unwrap();
        assert!(!r.passed);
        assert!(r.moment_violations.is_empty());
        assert_eq!(
            r.schedule_violations.len(),
            1 + NS.len(),
            "{:?}",
            r.schedule_violations
        );
    }
}
