mod common;

use common::XorModel;
use proptest::prelude::*;
use spinqec::sampler::{direct_sample, enumerate_subsets, run_subset_sampler, subset_weight, ShotPolicy};

fn all_weights(n: &[usize]) -> Vec<Vec<usize>> {
    n.iter().fold(vec![vec![]], |acc, &nc| {
        acc.into_iter().flat_map(|w| (0..=nc).map(move |k| [w.clone(), vec![k]].concat())).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weights_sum_to_one(n in prop::collection::vec(0usize..6, 1..5), ps in prop::collection::vec(0.0f64..0.5, 5)) {
        let p = &ps[..n.len()];
        let total: f64 = all_weights(&n).iter().map(|w| subset_weight(w, &n, p).unwrap()).sum();
        prop_assert!((total - 1.0).abs() < 1e-12, "{total}");
        let listed = enumerate_subsets(&n, p, 1e-300).unwrap();
        let total: f64 = listed.iter().map(|(_, a)| a).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn enumeration_is_exactly_the_heavy_subsets(
        n in prop::collection::vec(0usize..12, 1..5),
        ps in prop::collection::vec(1e-5f64..0.3, 5),
        log_t in -12.0f64..-1.0,
    ) {
        let p = &ps[..n.len()];
        let t = 10f64.powf(log_t);
        let mut expected: Vec<Vec<usize>> = all_weights(&n)
            .into_iter()
            .filter(|w| subset_weight(w, &n, p).unwrap() > t)
            .collect();
        let listed = enumerate_subsets(&n, p, t).unwrap();
        prop_assert!(listed.windows(2).all(|x| x[0].1 >= x[1].1));
        let mut got: Vec<Vec<usize>> = listed.into_iter().map(|(w, _)| w).collect();
        expected.sort();
        got.sort();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn lowering_the_threshold_refines_bounds(
        n in prop::collection::vec(1usize..5, 2..4),
        ps in prop::collection::vec(0.01f64..0.2, 4),
        seed in any::<u64>(),
    ) {
        let p = &ps[..n.len()];
        let model = XorModel { counts: n.clone(), flip: 0.0 };
        let mut prev: Option<(f64, f64)> = None;
        for t in [1e-1, 1e-2, 1e-3, 1e-5] {
            let run = run_subset_sampler(&model, p, t, ShotPolicy::fixed(200), seed, None).unwrap();
            let b = run.bounds;
            prop_assert!(b.lower <= b.upper);
            if let Some((lo, up)) = prev {
                prop_assert!(b.lower >= lo - 1e-15 && b.upper <= up + 1e-15);
            }
            prev = Some((b.lower, b.upper));
        }
    }
}

#[test]
fn xor_toy_matches_closed_form() {
    let (pp, pm): (f64, f64) = (4e-3, 2.4e-3);
    let model = XorModel { counts: vec![1, 1], flip: 0.0 };
    let exact = pp + pm - 2.0 * pp * pm;
    let run = run_subset_sampler(&model, &[pp, pm], 1e-12, ShotPolicy::fixed(50), 3, None).unwrap();
    assert!((run.bounds.lower - exact).abs() < 1e-15);
    assert!((run.bounds.upper - exact).abs() < 1e-15);
    let d = direct_sample(&model, &[pp, pm], 200_000, 3).unwrap();
    let sigma = (exact * (1.0 - exact) / d.shots as f64).sqrt();
    assert!((d.p_l - exact).abs() < 3.0 * sigma, "{} vs {exact}", d.p_l);
}

#[test]
fn bounds_bracket_direct_sampling_on_toy() {
    let model = XorModel { counts: vec![5, 3, 7], flip: 0.1 };
    let p: [f64; 3] = [0.05, 0.1, 0.02];
    let run = run_subset_sampler(&model, &p, 1e-4, ShotPolicy::fixed(2000), 11, None).unwrap();
    let d = direct_sample(&model, &p, 100_000, 11).unwrap();
    let tol = 3.0 * (d.std_err.powi(2) + run.bounds.std_err.powi(2)).sqrt();
    assert!(d.p_l >= run.bounds.lower - tol && d.p_l <= run.bounds.upper + tol);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let model = XorModel { counts: vec![6, 4, 9], flip: 0.2 };
    let p: [f64; 3] = [0.03, 0.07, 0.01];
    let policy = ShotPolicy { base: 300, cap: 5000, rel_target: 0.01 };
    let run_with = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_subset_sampler(&model, &p, 1e-6, policy, 99, None).unwrap())
    };
    let one = run_with(1);
    assert_eq!(one, run_with(4));
    assert_eq!(one, run_with(1));
    assert_ne!(one, run_subset_sampler(&model, &p, 1e-6, policy, 100, None).unwrap());
}
