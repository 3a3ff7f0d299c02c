//! Distances between empirical laws on the line.
//!
//! The ECDFs here are right-continuous step functions, so every supremum is
//! attained at (or just after) a sample point and the scans below are exact.
//! Mass gaps `i/n − j/m` are formed as one rounded division of integers and
//! shifts as one rounded subtraction, so all three distances compare the same
//! doubles.

use super::EmpiricalDist;
use crate::error::{Error, Result};

#[inline]
fn frac(count: usize, n: usize) -> f64 {
    count as f64 / n as f64
}

// i/na − j/nb, correctly rounded
#[inline]
fn mass_gap(i: usize, na: usize, j: usize, nb: usize) -> f64 {
    ((i * nb) as i128 - (j * na) as i128) as f64 / (na as f64 * nb as f64)
}

/// Kolmogorov distance `sup_x |F_P(x) − F_Q(x)|`.
pub fn ks_distance(p: &EmpiricalDist, q: &EmpiricalDist) -> f64 {
    let (a, b) = (p.values(), q.values());
    let (na, nb) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut sup = 0.0f64;
    while i < na || j < nb {
        let x = match (a.get(i), b.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => unreachable!(),
        };
        while i < na && a[i] <= x {
            i += 1;
        }
        while j < nb && b[j] <= x {
            j += 1;
        }
        sup = sup.max(mass_gap(i, na, j, nb).abs());
    }
    sup
}

// max over tie-group ends a_i of F_a(a_i) − F_b(a_i + eps) <= eps.
fn one_sided_feasible(a: &[f64], b: &[f64], eps: f64) -> bool {
    let (na, nb) = (a.len(), b.len());
    let mut j = 0;
    for i in 0..na {
        if i + 1 < na && a[i + 1] == a[i] {
            continue;
        }
        while j < nb && b[j] - a[i] <= eps {
            j += 1;
        }
        if mass_gap(i + 1, na, j, nb) > eps {
            return false;
        }
    }
    true
}

/// Whether `F_P(x−ε)−ε ≤ F_Q(x) ≤ F_P(x+ε)+ε` holds for all `x`.
pub fn levy_feasible(p: &EmpiricalDist, q: &EmpiricalDist, eps: f64) -> bool {
    one_sided_feasible(q.values(), p.values(), eps)
        && one_sided_feasible(p.values(), q.values(), eps)
}

/// Lévy distance, by bisection on `ε` down to adjacent floating-point values.
/// The result is the smallest double for which the Lévy condition holds, so
/// representable critical values (e.g. point masses at distance `a`) come
/// out exactly.
pub fn levy_distance(p: &EmpiricalDist, q: &EmpiricalDist) -> f64 {
    if levy_feasible(p, q, 0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    loop {
        let mid = f64::from_bits((lo.to_bits() + hi.to_bits()) / 2);
        if mid <= lo || mid >= hi {
            return hi;
        }
        if levy_feasible(p, q, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Ky Fan value of the quantile (comonotone) coupling `(F_P^-1(U), F_Q^-1(U))`:
/// the smallest `ε` with `P(|X − Y| > ε) ≤ ε`. For equal sizes this is the
/// coupling `x_(i) ↔ y_(i)`.
pub fn ky_fan_quantile(p: &EmpiricalDist, q: &EmpiricalDist) -> f64 {
    let (x, y) = (p.values(), q.values());
    if x.is_empty() || y.is_empty() {
        return 1.0;
    }
    // masses in units of 1/l, l = lcm(N, M)
    let l = x.len() / gcd(x.len(), y.len()) * y.len();
    let (wx, wy) = (l / x.len(), l / y.len());
    let mut cells = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j, mut pos) = (0, 0, 0);
    while i < x.len() && j < y.len() {
        let end = ((i + 1) * wx).min((j + 1) * wy);
        cells.push(((x[i] - y[j]).abs(), end - pos));
        pos = end;
        if end == (i + 1) * wx {
            i += 1;
        }
        if end == (j + 1) * wy {
            j += 1;
        }
    }
    cells.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut mass = 0;
    let mut best = cells[0].0;
    for (k, &(_, w)) in cells.iter().enumerate() {
        mass += w;
        let gap = cells.get(k + 1).map_or(0.0, |c| c.0);
        best = best.min(frac(mass, l).max(gap));
    }
    best
}

/// `(lower, upper)` bracket of the Prokhorov distance: Lévy below, the
/// quantile coupling's Ky Fan value above.
pub fn prokhorov_bounds(p: &EmpiricalDist, q: &EmpiricalDist) -> Result<(f64, f64)> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok((levy_distance(p, q), ky_fan_quantile(p, q)))
}

/// Dvoretzky–Kiefer–Wolfowitz half-width `sqrt(ln(2/δ) / (2n))`.
pub fn dkw_band(n: usize, delta: f64) -> f64 {
    assert!(n >= 1, "dkw_band needs n >= 1");
    assert!(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    ((2.0 / delta).ln() / (2.0 * n as f64)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: &[f64]) -> EmpiricalDist {
        EmpiricalDist::new(v.to_vec()).unwrap()
    }

    #[test]
    fn ks_examples() {
        assert_eq!(ks_distance(&d(&[0.0]), &d(&[1.0])), 1.0);
        assert_eq!(ks_distance(&d(&[0.5, 1.5]), &d(&[0.5, 1.5])), 0.0);
        assert_eq!(ks_distance(&d(&[0.0, 2.0]), &d(&[1.0, 3.0])), 0.5);
        assert_eq!(ks_distance(&d(&[0.0, 0.0, 1.0]), &d(&[0.0])), 1.0 / 3.0);
    }

    #[test]
    fn levy_point_masses() {
        assert_eq!(levy_distance(&d(&[0.0]), &d(&[0.3])), 0.3);
        assert_eq!(levy_distance(&d(&[0.3]), &d(&[0.0])), 0.3);
        assert_eq!(levy_distance(&d(&[0.0]), &d(&[2.0])), 1.0);
        assert_eq!(levy_distance(&d(&[1.0, 2.0]), &d(&[1.0, 2.0])), 0.0);
    }

    #[test]
    fn levy_vertical_gap() {
        // {0,0,0,1} vs {0,1,1,1}: horizontal shift of 1 or vertical gap of 1/2
        let v = levy_distance(&d(&[0.0, 0.0, 0.0, 1.0]), &d(&[0.0, 1.0, 1.0, 1.0]));
        assert_eq!(v, 0.5);
    }

    #[test]
    fn prokhorov_examples() {
        let a = d(&[0.1, 0.7, 2.0]);
        assert_eq!(prokhorov_bounds(&a, &a).unwrap(), (0.0, 0.0));
        let zeros = EmpiricalDist::point_mass(0.0, 50).unwrap();
        let shifted = EmpiricalDist::point_mass(0.3, 50).unwrap();
        assert_eq!(prokhorov_bounds(&zeros, &shifted).unwrap(), (0.3, 0.3));
        let far = EmpiricalDist::point_mass(2.0, 50).unwrap();
        assert_eq!(prokhorov_bounds(&zeros, &far).unwrap(), (1.0, 1.0));
        let (lo, hi) = prokhorov_bounds(&d(&[0.0, 1.0, 5.0]), &d(&[0.2, 1.1])).unwrap();
        assert!(lo <= hi);
    }

    #[test]
    fn quantile_coupling_with_unequal_sizes() {
        // the quantiles of {0, 1} and {0, 0, 1} disagree on (1/2, 2/3]
        assert_eq!(
            ky_fan_quantile(&d(&[0.0, 1.0]), &d(&[0.0, 0.0, 1.0])),
            1.0 / 6.0
        );
        assert_eq!(
            ky_fan_quantile(&d(&[0.0, 1.0]), &d(&[0.0, 0.0, 1.0, 1.0])),
            0.0
        );
        assert_eq!(ky_fan_quantile(&d(&[0.0]), &d(&[0.0, 0.0, 0.0, 0.5])), 0.25);
    }

    #[test]
    fn dkw_values() {
        assert!((dkw_band(1000, 0.05) - 0.042_947).abs() < 1e-5);
        let near_one = dkw_band(10, 1.0 - 1e-12);
        assert!((near_one - (2f64.ln() / 20.0).sqrt()).abs() < 1e-9);
        assert!((dkw_band(4000, 0.1) - dkw_band(1000, 0.1) / 2.0).abs() < 1e-15);
    }
}
