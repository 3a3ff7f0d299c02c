use proptest::prelude::*;
use rwre::{lipschitz_selfcheck, GridPath, PathFunctional, Seed};

fn path_strategy() -> impl Strategy<Value = Vec<f64>> {
    (1usize..40).prop_flat_map(|m| prop::collection::vec(-4.0f64..4.0, m + 1))
}

fn lipschitz_catalog() -> Vec<PathFunctional> {
    vec![
        PathFunctional::clipped_endpoint(1.5).unwrap(),
        PathFunctional::clipped_running_max(1.5).unwrap(),
        PathFunctional::clipped_abs_max(2.0).unwrap(),
        PathFunctional::clipped_integral(1.0).unwrap(),
        PathFunctional::soft_barrier(-1.0, 1.5, 0.25).unwrap(),
    ]
}

fn clamp_path(v: &[f64], l: f64) -> Vec<f64> {
    v.iter().map(|x| x.clamp(-l, l)).collect()
}

proptest! {
    #[test]
    fn clipping_is_idempotent(v in path_strategy(), l in 0.1f64..3.0) {
        let clipped = clamp_path(&v, l);
        for f in [
            PathFunctional::clipped_endpoint(l).unwrap(),
            PathFunctional::clipped_running_max(l).unwrap(),
            PathFunctional::clipped_abs_max(l).unwrap(),
        ] {
            prop_assert_eq!(f.evaluate_vertices(&v), f.evaluate_vertices(&clipped));
        }
    }

    #[test]
    fn values_stay_within_bound(v in path_strategy()) {
        for f in lipschitz_catalog() {
            prop_assert!(f.evaluate_vertices(&v).abs() <= f.bound());
        }
    }

    #[test]
    fn refinement_does_not_change_values(v in path_strategy(), factor in 1usize..6) {
        let p = GridPath::from_vertices(v);
        let fine = p.refine(factor);
        let mut all = lipschitz_catalog();
        all.push(PathFunctional::barrier_indicator(-1.0, 1.5).unwrap());
        for f in all {
            let (a, b) = (f.evaluate(&p), f.evaluate(&fine));
            prop_assert!((a - b).abs() <= 1e-12, "{:?}: {} vs {}", f, a, b);
        }
    }

    #[test]
    fn lipschitz_in_sup_norm(v in path_strategy(), seed in any::<u64>()) {
        let shift: Vec<f64> = v
            .iter()
            .enumerate()
            .map(|(i, x)| x + 0.3 * ((i as f64 + seed as f64 * 1e-3).sin()))
            .collect();
        let (p, q) = (GridPath::from_vertices(v), GridPath::from_vertices(shift));
        let d = p.sup_distance(&q);
        for f in lipschitz_catalog() {
            let k = f.lipschitz().unwrap();
            prop_assert!((f.evaluate(&p) - f.evaluate(&q)).abs() <= k * d * (1.0 + 1e-12) + 1e-15);
        }
    }

    #[test]
    fn widening_a_barrier_never_lowers_it(
        v in path_strategy(),
        c1 in -2.0f64..-0.01,
        c2 in 0.01f64..2.0,
        widen in 0.0f64..1.0,
    ) {
        let narrow = PathFunctional::barrier_indicator(c1, c2).unwrap();
        let wide = PathFunctional::barrier_indicator(c1 - widen, c2 + widen).unwrap();
        prop_assert!(wide.evaluate_vertices(&v) >= narrow.evaluate_vertices(&v));
        let soft_narrow = PathFunctional::soft_barrier(c1, c2, 0.2).unwrap();
        let soft_wide = PathFunctional::soft_barrier(c1 - widen, c2 + widen, 0.2).unwrap();
        prop_assert!(soft_wide.evaluate_vertices(&v) >= soft_narrow.evaluate_vertices(&v));
        // the soft barrier is dominated by the indicator of the same band
        prop_assert!(soft_narrow.evaluate_vertices(&v) <= narrow.evaluate_vertices(&v));
    }
}

#[test]
fn selfcheck_passes_for_the_lipschitz_catalog() {
    for f in lipschitz_catalog() {
        let r = lipschitz_selfcheck(&f, 2000, Seed::new(4)).unwrap();
        assert!(r.max_ratio <= r.lipschitz * (1.0 + 1e-9), "{f:?}: {r:?}");
        assert!(r.max_abs <= r.bound);
    }
}

#[test]
fn descriptor_round_trip() {
    let mut all = lipschitz_catalog();
    all.push(PathFunctional::barrier_indicator(-1.0, 1.0).unwrap());
    for f in all {
        let json = serde_json::to_string(&f).unwrap();
        let back: PathFunctional = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f, "{json}");
    }
}
