use proptest::prelude::*;
use rwre::metrics::{
    dkw_band, ks_distance, ky_fan_quantile, levy_distance, prokhorov_bounds, EmpiricalDist,
};

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// replicate both samples to a common size, then scan ε over the pair gaps and mass levels
fn naive_quantile_ky_fan(p: &EmpiricalDist, q: &EmpiricalDist) -> f64 {
    let l = p.len() / gcd(p.len(), q.len()) * q.len();
    let expand = |d: &EmpiricalDist| -> Vec<f64> {
        d.values()
            .iter()
            .flat_map(|&x| std::iter::repeat_n(x, l / d.len()))
            .collect()
    };
    let gaps: Vec<f64> = expand(p)
        .iter()
        .zip(expand(q))
        .map(|(x, y)| (x - y).abs())
        .collect();
    let candidates = gaps
        .iter()
        .copied()
        .chain((0..=l).map(|k| k as f64 / l as f64));
    candidates
        .filter(|&eps| gaps.iter().filter(|&&g| g > eps).count() as f64 / l as f64 <= eps)
        .fold(f64::INFINITY, f64::min)
}

fn sample() -> impl Strategy<Value = EmpiricalDist> {
    prop_oneof![
        prop::collection::vec(-3.0f64..3.0, 1..40),
        // coarse lattice values to exercise ties
        prop::collection::vec((-6i32..6).prop_map(|k| k as f64 * 0.25), 1..40),
    ]
    .prop_map(|v| EmpiricalDist::new(v).unwrap())
}

proptest! {
    #[test]
    fn symmetry(p in sample(), q in sample()) {
        prop_assert_eq!(ks_distance(&p, &q), ks_distance(&q, &p));
        prop_assert_eq!(levy_distance(&p, &q), levy_distance(&q, &p));
    }

    #[test]
    fn triangle_inequality(p in sample(), q in sample(), r in sample()) {
        prop_assert!(ks_distance(&p, &r) <= ks_distance(&p, &q) + ks_distance(&q, &r) + 1e-9);
        prop_assert!(levy_distance(&p, &r) <= levy_distance(&p, &q) + levy_distance(&q, &r) + 1e-9);
    }

    #[test]
    fn levy_is_below_ks(p in sample(), q in sample()) {
        prop_assert!(levy_distance(&p, &q) <= ks_distance(&p, &q));
    }

    #[test]
    fn distances_vanish_on_the_diagonal(p in sample()) {
        prop_assert_eq!(ks_distance(&p, &p), 0.0);
        prop_assert_eq!(levy_distance(&p, &p), 0.0);
        prop_assert_eq!(prokhorov_bounds(&p, &p).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn prokhorov_sandwich(p in sample(), q in sample()) {
        let (lo, hi) = prokhorov_bounds(&p, &q).unwrap();
        prop_assert!(lo <= hi, "{} > {}", lo, hi);
        prop_assert!(hi <= 1.0);
    }

    #[test]
    fn sandwich_is_tight_on_point_masses(a in -3.0f64..3.0, b in -3.0f64..3.0, n in 1usize..30) {
        let (p, q) = (EmpiricalDist::point_mass(a, n).unwrap(), EmpiricalDist::point_mass(b, n).unwrap());
        let (lo, hi) = prokhorov_bounds(&p, &q).unwrap();
        prop_assert_eq!(lo, hi);
        prop_assert!((lo - (a - b).abs().min(1.0)).abs() <= 1e-15);
    }

    #[test]
    fn ky_fan_matches_the_replicated_coupling(p in sample(), q in sample()) {
        let (fast, naive) = (ky_fan_quantile(&p, &q), naive_quantile_ky_fan(&p, &q));
        prop_assert!((fast - naive).abs() <= 1e-12, "{} vs {}", fast, naive);
    }

    #[test]
    fn shifted_copies_have_ky_fan_equal_to_the_shift(v in prop::collection::vec(-3.0f64..3.0, 1..40), s in 0.0f64..0.9) {
        let p = EmpiricalDist::new(v.clone()).unwrap();
        let q = EmpiricalDist::new(v.iter().map(|x| x + s).collect()).unwrap();
        let k = ky_fan_quantile(&p, &q);
        prop_assert!((k - s).abs() <= 1e-12);
    }
}

#[test]
fn dkw_matches_direct_formula() {
    for n in [1usize, 10, 2000, 1_000_000] {
        for delta in [0.01, 0.05, 0.5] {
            let direct = ((2.0f64 / delta).ln() / (2.0 * n as f64)).sqrt();
            assert_eq!(dkw_band(n, delta), direct);
        }
    }
}
