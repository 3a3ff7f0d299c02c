use rwre::stats::mean_and_stderr;
use rwre::{quenched_stats, sample_trajectory, EnvRealization, Seed, StepDistribution};

// Composite Simpson on [0, hi] with `m` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, hi: f64, m: usize) -> f64 {
    let h = hi / m as f64;
    let inner: f64 = (1..m)
        .map(|i| f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(0.0) + inner + f(hi)) * h / 3.0
}

fn normal_abs_moment_numeric(sd: f64, alpha: f64) -> f64 {
    let density =
        |x: f64| (-(x * x) / (2.0 * sd * sd)).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt());
    2.0 * simpson(|x| x.powf(alpha) * density(x), 40.0 * sd, 200_000)
}

fn environment() -> EnvRealization {
    let steps = (0..60)
        .map(|k| {
            let x = k as f64;
            if k % 3 == 0 {
                StepDistribution::TwoPoint {
                    low: -1.0 - 0.01 * x,
                    high: 0.5 + 0.02 * x,
                    p_high: 0.2 + 0.01 * x,
                }
            } else {
                StepDistribution::Normal {
                    mean: (0.3 * x).sin(),
                    sd: 0.5 + 0.03 * x,
                }
            }
        })
        .collect();
    EnvRealization::from_steps(steps)
}

#[test]
fn quenched_stats_match_numerical_integration() {
    let env = environment();
    for alpha in [2.5, 3.0, 3.7] {
        let st = quenched_stats(&env, alpha).unwrap();
        let (mut m, mut eta, mut zeta) = (0.0, 0.0, 0.0);
        for (k, step) in env.steps().iter().enumerate() {
            match *step {
                StepDistribution::Normal { mean, sd } => {
                    m += mean;
                    eta += sd * sd;
                    zeta += normal_abs_moment_numeric(sd, alpha);
                }
                StepDistribution::TwoPoint { low, high, p_high } => {
                    let c = low + p_high * (high - low);
                    m += c;
                    eta += (1.0 - p_high) * (low - c).powi(2) + p_high * (high - c).powi(2);
                    zeta +=
                        (1.0 - p_high) * (c - low).powf(alpha) + p_high * (high - c).powf(alpha);
                }
                _ => unreachable!(),
            }
            let k = k + 1;
            assert!((st.m(k) - m).abs() <= 1e-8 * m.abs().max(1.0), "M_{k}");
            assert!((st.eta(k) - eta).abs() <= 1e-8 * eta, "eta_{k}");
            assert!(
                (st.zeta(k) - zeta).abs() <= 1e-8 * zeta,
                "zeta_{k}: {} vs {zeta}",
                st.zeta(k)
            );
        }
    }
}

#[test]
fn trajectories_have_the_quenched_mean_and_variance() {
    let env = environment();
    let st = quenched_stats(&env, 3.0).unwrap();
    let n = env.len();
    let ends: Vec<f64> = (0..100_000u64)
        .map(|i| sample_trajectory(&env, Seed::new(9).index(i)).values()[n])
        .collect();
    let (mean, se) = mean_and_stderr(&ends);
    assert!((mean - st.m(n)).abs() < 3.0 * se, "{mean} vs {}", st.m(n));
    let var = rwre::stats::sample_variance(&ends);
    // the variance estimator's relative sd is about sqrt(2 / N) for near-Gaussian ends
    assert!(
        (var / st.eta(n) - 1.0).abs() < 3.0 * (2.0f64 / 100_000.0).sqrt(),
        "{var} vs {}",
        st.eta(n)
    );
}
