//! The rate sequences of the quenched invariance principle and log-log fits.
//!
//! `a_n` and `b_n` are power-log terms `c · n^p · (ln n)^q`, which makes every
//! asymptotic condition on them decidable from the exponents alone.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `coef · n^n_exp · (ln n)^log_exp`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coef: f64,
    pub n_exp: f64,
    #[serde(default)]
    pub log_exp: f64,
}

impl Term {
    pub fn new(coef: f64, n_exp: f64, log_exp: f64) -> Self {
        Term {
            coef,
            n_exp,
            log_exp,
        }
    }

    pub fn eval(&self, n: f64) -> f64 {
        self.coef * n.powf(self.n_exp) * n.ln().powf(self.log_exp)
    }

    // sign of the growth exponent pair, compared lexicographically
    fn growth(n_exp: f64, log_exp: f64) -> std::cmp::Ordering {
        n_exp
            .partial_cmp(&0.0)
            .unwrap()
            .then(log_exp.partial_cmp(&0.0).unwrap())
    }
}

/// The reference sequence `n^{−1/4} (ln n)^{3/4}` of the liminf condition on `a_n`.
pub fn reference_a(n: f64) -> f64 {
    n.powf(-0.25) * n.ln().powf(0.75)
}

/// Moment orders and the two scale sequences. `zeta_mean` is `E(ζ_1)` of the
/// environment the schedule is meant for.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateSchedule {
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub a: Term,
    pub b: Term,
    pub zeta_mean: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub n: usize,
    pub a_n: f64,
    pub b_n: f64,
    pub y_n: f64,
    pub r_n: f64,
}

/// How a config names its schedule. Presets are completed with the moment
/// orders and `E(ζ_1)` at run time.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum ScheduleDescriptor {
    /// The polynomial-rate choice: `a_n = n^{(1−α/2)/(1+α)}` for `α < 5`,
    /// `a_n = n^{−1/4}(ln n)^{3/4}` for `α ≥ 5`, and `b_n = 2E(ζ_1) n`.
    #[default]
    Standard,
    /// `a_n = 1/ln n`, `b_n = 2E(ζ_1) n ln n`, for the degenerate limit.
    AlmostSure,
    Custom {
        a: Term,
        b: Term,
    },
}

impl ScheduleDescriptor {
    pub fn resolve(
        &self,
        alpha: f64,
        beta1: f64,
        beta2: f64,
        beta3: f64,
        zeta_mean: f64,
    ) -> RateSchedule {
        let (a, b) = match self {
            ScheduleDescriptor::Standard => {
                let a = if alpha < 5.0 {
                    Term::new(1.0, (1.0 - alpha / 2.0) / (1.0 + alpha), 0.0)
                } else {
                    Term::new(1.0, -0.25, 0.75)
                };
                (a, Term::new(2.0 * zeta_mean, 1.0, 0.0))
            }
            ScheduleDescriptor::AlmostSure => (
                Term::new(1.0, 0.0, -1.0),
                Term::new(2.0 * zeta_mean, 1.0, 1.0),
            ),
            ScheduleDescriptor::Custom { a, b } => (*a, *b),
        };
        RateSchedule {
            alpha,
            beta1,
            beta2,
            beta3,
            a,
            b,
            zeta_mean,
        }
    }
}

impl RateSchedule {
    /// The polynomial-rate schedule with the orders `β1 = 2α, β2 = β3 = α`.
    pub fn standard(alpha: f64, zeta_mean: f64) -> Self {
        ScheduleDescriptor::Standard.resolve(alpha, 2.0 * alpha, alpha, alpha, zeta_mean)
    }

    /// The degenerate-limit schedule with the orders `β1 = 2α, β2 = β3 = α`.
    pub fn almost_sure(alpha: f64, zeta_mean: f64) -> Self {
        ScheduleDescriptor::AlmostSure.resolve(alpha, 2.0 * alpha, alpha, alpha, zeta_mean)
    }

    pub fn a_n(&self, n: usize) -> f64 {
        self.a.eval(n as f64)
    }

    pub fn b_n(&self, n: usize) -> f64 {
        self.b.eval(n as f64)
    }

    /// `y_n = a_n + b_n (a_n √n)^{−α}`.
    pub fn y_n(&self, n: usize) -> f64 {
        let a = self.a_n(n);
        a + self.b_n(n) * (a * (n as f64).sqrt()).powf(-self.alpha)
    }

    /// `r_n = n^{1−β1/2} a_n^{β1} + n^{1−β2} (ln n)^{β2} a_n^{−2β2} + n b_n^{−β3}`.
    pub fn r_n(&self, n: usize) -> f64 {
        let (a, b, x) = (self.a_n(n), self.b_n(n), n as f64);
        x.powf(1.0 - self.beta1 / 2.0) * a.powf(self.beta1)
            + x.powf(1.0 - self.beta2) * x.ln().powf(self.beta2) * a.powf(-2.0 * self.beta2)
            + x * b.powf(-self.beta3)
    }

    /// `min a_n / (n^{−1/4}(ln n)^{3/4})` over `ns`, a finite-sample proxy for ã.
    pub fn a_tilde(&self, ns: &[usize]) -> f64 {
        ns.iter()
            .map(|&n| self.a_n(n) / reference_a(n as f64))
            .fold(f64::INFINITY, f64::min)
    }

    /// Which term of `y_n` is larger at `n`.
    pub fn y_order(&self, n: usize) -> &'static str {
        let a = self.a_n(n);
        let shift = self.b_n(n) * (a * (n as f64).sqrt()).powf(-self.alpha);
        if a >= shift {
            "a_n"
        } else {
            "b_n (a_n sqrt n)^-alpha"
        }
    }

    /// Every violated condition, as a readable message. Asymptotic conditions
    /// are decided from the exponents; `b_n ≥ 2E(ζ_1) n` is checked at each
    /// `n` in `ns`.
    pub fn violations(&self, ns: &[usize]) -> Vec<String> {
        use std::cmp::Ordering::*;
        let mut out = Vec::new();
        if !(self.alpha > 2.0) {
            out.push(format!("alpha = {} must exceed 2", self.alpha));
        }
        for (name, v) in [
            ("beta1", self.beta1),
            ("beta2", self.beta2),
            ("beta3", self.beta3),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                out.push(format!("{name} = {v} must be positive"));
            }
        }
        if !(self.a.coef > 0.0) || !(self.b.coef > 0.0) {
            out.push("a_n and b_n need positive coefficients".into());
        }
        if Term::growth(self.a.n_exp, self.a.log_exp) != Less {
            out.push("a_n does not tend to 0".into());
        }
        if Term::growth(self.a.n_exp + 0.25, self.a.log_exp - 0.75) == Less {
            out.push("liminf a_n / (n^-1/4 (ln n)^3/4) = 0".into());
        }
        let shift_n = self.b.n_exp - self.alpha * (self.a.n_exp + 0.5);
        let shift_log = self.b.log_exp - self.alpha * self.a.log_exp;
        if Term::growth(shift_n, shift_log) != Less {
            out.push("b_n (a_n sqrt n)^-alpha does not tend to 0".into());
        }
        match Term::growth(self.b.n_exp - 1.0, self.b.log_exp) {
            Less => out.push("b_n grows slower than n".into()),
            Equal if self.b.coef < 2.0 * self.zeta_mean => out.push(format!(
                "b_n = {} n is below 2 E(zeta_1) n = {} n",
                self.b.coef,
                2.0 * self.zeta_mean
            )),
            _ => {}
        }
        for &n in ns {
            if n < 2 {
                out.push(format!("n = {n}: need n >= 2"));
                continue;
            }
            let need = 2.0 * self.zeta_mean * n as f64;
            if self.b_n(n) < need {
                out.push(format!(
                    "n = {n}: b_n = {} < 2 E(zeta_1) n = {need}",
                    self.b_n(n)
                ));
            }
        }
        out
    }

    pub fn validate(&self, ns: &[usize]) -> Result<()> {
        let v = self.violations(ns);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSchedule(v.join("; ")))
        }
    }
}

/// `(n, a_n, b_n, y_n, r_n)` at each `n`, after validating the schedule.
pub fn theoretical_rates(sched: &RateSchedule, ns: &[usize]) -> Result<Vec<RateRow>> {
    sched.validate(ns)?;
    Ok(ns
        .iter()
        .map(|&n| RateRow {
            n,
            a_n: sched.a_n(n),
            b_n: sched.b_n(n),
            y_n: sched.y_n(n),
            r_n: sched.r_n(n),
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square residual in log space.
    pub residual: f64,
    /// `max_n distance_n / rate_n`, when a rate sequence was supplied.
    pub envelope: Option<f64>,
}

/// Least squares of `ln distance` on `ln n`.
pub fn fit_rate(ns: &[usize], distances: &[f64], rate: Option<&[f64]>) -> Result<RateFit> {
    if ns.len() != distances.len() {
        return Err(Error::LengthMismatch(ns.len(), distances.len()));
    }
    if ns.len() < 3 {
        return Err(Error::TooFewPoints(ns.len()));
    }
    if let Some(i) = distances.iter().position(|&d| !(d > 0.0 && d.is_finite())) {
        return Err(Error::NonPositiveDistance(i));
    }
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = distances.iter().map(|d| d.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let envelope = match rate {
        None => None,
        Some(r) if r.len() != distances.len() => {
            return Err(Error::LengthMismatch(distances.len(), r.len()))
        }
        Some(r) => Some(
            distances
                .iter()
                .zip(r)
                .map(|(d, r)| d / r)
                .fold(f64::NEG_INFINITY, f64::max),
        ),
    };
    Ok(RateFit {
        slope,
        intercept,
        residual: (ss / k).sqrt(),
        envelope,
    })
}
