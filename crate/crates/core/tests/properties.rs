use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use rainbow_core::count::{
    count_rainbow_pm, count_rainbow_pm_brute, count_uniform_pm, find_rainbow_pm, latin_transversal,
    reduce_to_uniform,
};
use rainbow_core::experiment::isotonic_fit;
use rainbow_core::hamilton::{
    contract_color_delete, find_rainbow_hc, is_rainbow_hamilton_cycle, lift_cycle,
    ColoredMultigraph, MultiEdge,
};
use rainbow_core::model::{
    complete_colored, sample_colored_graph, sample_hp_m, DEFAULT_EDGE_LIMIT,
};
use rainbow_core::process::{
    dyadic_interval_cover, entropy, lower_median, run_deletion_process, EventParams,
};
use rainbow_core::{Budget, ColoredHypergraph, CountMethod, RandomnessSpec};

fn budget() -> Budget {
    Budget::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampler_draws_m_distinct_edges(n in 1usize..6, k in 2usize..4, kappa in 1usize..6, seed: u64, frac in 0.0f64..=1.0) {
        let total = (n as u64).pow(k as u32);
        let m = (frac * total as f64).floor() as u64;
        let h = sample_hp_m(n, k, kappa, m, &mut RandomnessSpec::new(seed, 0).rng(), DEFAULT_EDGE_LIMIT).unwrap();
        prop_assert_eq!(h.edge_count() as u64, m);
        prop_assert!(h.edges().iter().all(|e| (e.color as usize) < kappa && e.verts.len() == k));
        let distinct: BTreeSet<_> = h.edges().iter().map(|e| e.verts.clone()).collect();
        prop_assert_eq!(distinct.len() as u64, m);
    }

    #[test]
    fn samples_are_nested_in_m(n in 2usize..6, seed: u64, a in 0u64..36, b in 0u64..36) {
        let total = (n * n) as u64;
        let (lo, hi) = (a.min(b) % (total + 1), a.max(b) % (total + 1));
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        let spec = RandomnessSpec::new(seed, 3);
        let small = sample_hp_m(n, 2, n, lo, &mut spec.rng(), DEFAULT_EDGE_LIMIT).unwrap();
        let large = sample_hp_m(n, 2, n, hi, &mut spec.rng(), DEFAULT_EDGE_LIMIT).unwrap();
        prop_assert!(small.edges().iter().all(|e| large.edges().contains(e)));
    }

    #[test]
    fn json_round_trip(n in 1usize..5, k in 2usize..4, seed: u64) {
        let mut rng = RandomnessSpec::new(seed, 0).rng();
        let m = rng.gen_range(0..=(n as u64).pow(k as u32));
        let h = sample_hp_m(n, k, n + 1, m, &mut rng, DEFAULT_EDGE_LIMIT).unwrap();
        prop_assert_eq!(ColoredHypergraph::from_json(&h.to_json()).unwrap(), h);
    }

    #[test]
    fn found_matchings_are_rainbow_and_perfect(n in 1usize..6, k in 2usize..4, seed: u64) {
        let mut rng = RandomnessSpec::new(seed, 1).rng();
        let total = (n as u64).pow(k as u32);
        let m = rng.gen_range(0..=total);
        let h = sample_hp_m(n, k, n, m, &mut rng, DEFAULT_EDGE_LIMIT).unwrap();
        let found = find_rainbow_pm(&h, budget()).unwrap();
        let (count, _) = count_rainbow_pm_brute(&h, budget()).unwrap();
        prop_assert_eq!(found.is_some(), count > 0);
        if let Some(pm) = found {
            prop_assert!(pm.is_rainbow() && pm.is_perfect_in(&h));
            prop_assert_eq!(pm.len(), n);
        }
    }

    #[test]
    fn graph_mode_matchings(n in 2usize..9, seed: u64) {
        let mut rng = RandomnessSpec::new(seed, 2).rng();
        let m = rng.gen_range(0..=(n * (n - 1) / 2) as u64);
        let g = sample_colored_graph(n, m, n, &mut rng, DEFAULT_EDGE_LIMIT).unwrap();
        if let Some(pm) = find_rainbow_pm(&g, budget()).unwrap() {
            prop_assert!(n % 2 == 0);
            prop_assert!(pm.is_rainbow() && pm.is_perfect_in(&g));
            prop_assert_eq!(pm.len(), n / 2);
        }
    }

    #[test]
    fn counters_agree(n in 1usize..6, seed: u64) {
        let mut rng = RandomnessSpec::new(seed, 4).rng();
        let m = rng.gen_range(0..=(n * n) as u64);
        let h = sample_hp_m(n, 2, n, m, &mut rng, DEFAULT_EDGE_LIMIT).unwrap();
        let brute = count_rainbow_pm(&h, CountMethod::Brute, budget()).unwrap().value;
        let ie = count_rainbow_pm(&h, CountMethod::ColorInclusionExclusion, budget()).unwrap().value;
        prop_assert_eq!(brute, ie);
    }

    #[test]
    fn reduction_preserves_counts(n in 1usize..5, k in 2usize..4, seed: u64) {
        let mut rng = RandomnessSpec::new(seed, 5).rng();
        let m = rng.gen_range(0..=(n as u64).pow(k as u32));
        let h = sample_hp_m(n, k, n, m, &mut rng, DEFAULT_EDGE_LIMIT).unwrap();
        let direct = count_rainbow_pm(&h, CountMethod::Brute, budget()).unwrap().value;
        let u = reduce_to_uniform(&h).unwrap();
        prop_assert_eq!(u.edges.len(), h.edge_count());
        prop_assert_eq!(count_uniform_pm(&u, budget()).unwrap(), direct);
    }

    #[test]
    fn weight_identity_along_deletions(n in 1usize..4, seed: u64, steps in 0usize..9) {
        let mut rng = RandomnessSpec::new(seed, 6).rng();
        let h = complete_colored(n, 2, n, &mut rng, DEFAULT_EDGE_LIMIT).unwrap();
        let order = h.random_edge_ordering(&mut rng);
        let t = steps.min(order.len());
        let trace = run_deletion_process(&h, &order, t, &EventParams::default(), budget()).unwrap();
        prop_assert_eq!(trace.steps.len(), t + 1);
        for s in &trace.steps {
            prop_assert!(s.weight_identity_holds(n));
        }
        let phi_t = trace.reconstruct_phi(t).unwrap();
        prop_assert_eq!(phi_t, num_rational::BigRational::from_integer(trace.steps[t].phi.clone().into()));
        // phi never increases
        prop_assert!(trace.steps.windows(2).all(|w| w[1].phi <= w[0].phi));
    }

    #[test]
    fn median_definition(values in prop::collection::vec(0u32..20, 1..30)) {
        let med = lower_median(&values).unwrap();
        let larger = |x: u32| values.iter().filter(|&&v| v > x).count();
        if 2 * larger(med) >= values.len() {
            // no larger element of the multiset also qualifies
            prop_assert!(values.iter().all(|&v| v <= med || 2 * larger(v) < values.len()));
        } else {
            prop_assert_eq!(med, *values.iter().min().unwrap());
            prop_assert!(values.iter().all(|&v| 2 * larger(v) < values.len()));
        }
    }

    #[test]
    fn entropy_is_bounded(weights in prop::collection::vec(0.0f64..10.0, 1..40)) {
        prop_assume!(weights.iter().any(|&w| w > 0.0));
        let h = entropy(&weights).unwrap();
        prop_assert!(h >= -1e-12 && h <= (weights.len() as f64).ln() + 1e-12);
    }

    #[test]
    fn dyadic_cover_conclusions(exponents in prop::collection::vec(-1.0f64..1.0, 64), m in 1usize..3) {
        let weights: Vec<f64> = exponents.iter().map(|x| x.exp()).collect();
        let m = m as f64;
        prop_assume!(entropy(&weights).unwrap() > 64f64.ln() - m);
        let cover = dyadic_interval_cover(&weights, m).unwrap();
        prop_assert!(cover.satisfies(&weights, m));
    }

    #[test]
    fn isotonic_fit_is_monotone(values in prop::collection::vec(0.0f64..1.0, 1..20)) {
        let w = vec![1.0; values.len()];
        let fit = isotonic_fit(&values, &w);
        prop_assert!(fit.windows(2).all(|p| p[0] <= p[1] + 1e-12));
        let total: f64 = values.iter().sum();
        prop_assert!((fit.iter().sum::<f64>() - total).abs() < 1e-9);
        let again = isotonic_fit(&fit, &w);
        prop_assert!(again.iter().zip(&fit).all(|(a, b)| (a - b).abs() < 1e-12));
    }

    #[test]
    fn latin_transversals_are_valid(n in 1usize..6, seed: u64, density in 0.3f64..1.0) {
        let mut rng = RandomnessSpec::new(seed, 7).rng();
        let a: Vec<Vec<u32>> = (0..n)
            .map(|_| (0..n).map(|_| if rng.gen_bool(density) { rng.gen_range(1..=n as u32) } else { 0 }).collect())
            .collect();
        if let Some(cells) = latin_transversal(&a, budget()).unwrap() {
            prop_assert_eq!(cells.len(), n);
            let rows: BTreeSet<_> = cells.iter().map(|c| c.0).collect();
            let cols: BTreeSet<_> = cells.iter().map(|c| c.1).collect();
            let vals: BTreeSet<_> = cells.iter().map(|&(i, j)| a[i][j]).collect();
            prop_assert!(rows.len() == n && cols.len() == n && vals.len() == n);
            prop_assert!(!vals.contains(&0));
        }
    }

    #[test]
    fn hamilton_cycles_validate(n in 2usize..9, seed: u64) {
        let mut rng = RandomnessSpec::new(seed, 8).rng();
        let max = (n * (n - 1) / 2) as u64;
        let m = rng.gen_range(0..=max);
        let g = ColoredMultigraph::from_graph(
            &sample_colored_graph(n, m, n, &mut rng, DEFAULT_EDGE_LIMIT).unwrap(),
        ).unwrap();
        if let Some(c) = find_rainbow_hc(&g, budget()).unwrap() {
            prop_assert!(is_rainbow_hamilton_cycle(&g, &c));
        }
    }

    /// A planted rainbow cycle through the contracted edge, plus chords of the
    /// contracted edge's color, survives contraction and lifts back to itself.
    #[test]
    fn contract_then_lift_round_trip(half in 1usize..5, seed: u64, chords in 0usize..6) {
        let n = 2 * half + 1;
        let mut rng = RandomnessSpec::new(seed, 9).rng();
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.shuffle(&mut rng);
        let mut colors: Vec<u32> = (0..n as u32).collect();
        colors.shuffle(&mut rng);
        let mut edges: Vec<MultiEdge> = (0..n)
            .map(|i| {
                let (u, v) = (order[i], order[(i + 1) % n]);
                MultiEdge { u: u.min(v), v: u.max(v), color: colors[i] }
            })
            .collect();
        let cycle_edges: BTreeSet<usize> = (0..n).collect();
        let e = rng.gen_range(0..n);
        for _ in 0..chords {
            let u = rng.gen_range(0..n as u32);
            let v = rng.gen_range(0..n as u32);
            if u != v {
                edges.push(MultiEdge { u: u.min(v), v: u.max(v), color: colors[e] });
            }
        }
        let g = ColoredMultigraph::new(n, n, edges).unwrap();
        let (h, map) = contract_color_delete(&g, e).unwrap();
        let c = find_rainbow_hc(&h, budget()).unwrap().expect("image of the planted cycle");
        let lifted = lift_cycle(&g, &map, &c).unwrap();
        prop_assert!(is_rainbow_hamilton_cycle(&g, &lifted));
        prop_assert!(lifted.edges.contains(&e));
        let got: BTreeSet<usize> = lifted.edges.iter().copied().collect();
        prop_assert_eq!(got, cycle_edges);
    }
}

#[test]
fn reduction_of_complete_instance_counts_latin_transversals() {
    // a cyclic latin square of odd order has n transversals per diagonal shift
    let n = 3;
    let edges = (0..n * n)
        .map(|t| {
            let (i, j) = ((t / n) as u32, (t % n) as u32);
            rainbow_core::ColoredEdge::new(vec![i, j], (i + j) % n as u32)
        })
        .collect();
    let h = ColoredHypergraph::partite(n, 2, n, edges).unwrap();
    let u = reduce_to_uniform(&h).unwrap();
    assert_eq!(count_uniform_pm(&u, budget()).unwrap(), BigUint::from(3u32));
}
