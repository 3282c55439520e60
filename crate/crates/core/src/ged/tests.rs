use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::concept::init_concept;
use crate::graph::{random_graph, ContourGraph};

fn pair(seed: u64, n: usize, m: usize) -> (ContourGraph<f64>, ContourGraph<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_graph(&mut rng, n, true);
    let c = random_graph(&mut rng, m, true);
    (g, c)
}

fn path_sum(r: &GedResult<f64>) -> f64 {
    r.edit_path.iter().map(EditOp::cost).fold(0.0, |a, b| a + b)
}

#[test]
fn self_match_is_zero_and_exact() {
    for seed in 0..20 {
        let (g, _) = pair(seed, 3 + (seed as usize % 20), 1);
        let c = init_concept(&g, "self").unwrap();
        let r = ged_search(&g, &c.graph, &CostConfig::default(), Budget::unlimited());
        assert_eq!(r.distance, 0.0, "seed {seed}");
        assert!(r.exact);
    }
}

#[test]
fn stroke_versus_ten_node_loop() {
    let (g, _) = pair(3, 3, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let big = random_graph::<f64, _>(&mut rng, 9, true);
    let cfg = CostConfig::default();
    let oracle = exact_ged(&g, &big, &cfg).unwrap();
    let r = ged_search(&g, &big, &cfg, Budget::unlimited());
    assert!(r.distance >= 6.0);
    assert!((r.distance - oracle.distance).abs() <= 1e-9);
}

#[test]
fn zero_budget_is_an_inexact_upper_bound() {
    let cfg = CostConfig::default();
    for seed in 0..30 {
        let (g, c) = pair(seed, 6, 6);
        let r = ged_search(&g, &c, &cfg, Budget::expansions(0));
        assert!(!r.exact);
        assert_eq!(r.expansions, 0);
        assert!(r.distance >= exact_ged(&g, &c, &cfg).unwrap().distance - 1e-9);
    }
}

#[test]
fn f32_search_runs() {
    let (g, c) = pair(5, 6, 6);
    let r = ged_search(&g.cast::<f32>(), &c.cast::<f32>(), &CostConfig::<f32>::default(), Budget::unlimited());
    let exact = exact_ged(&g, &c, &CostConfig::default()).unwrap();
    assert!((r.distance as f64 - exact.distance).abs() < 1e-4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn search_agrees_with_oracle(seed in any::<u64>(), n in 0usize..7, m in 0usize..7) {
        let (g, c) = pair(seed, n.max(1), m.max(1));
        let cfg = CostConfig::default();
        let oracle = exact_ged(&g, &c, &cfg).unwrap();
        let r = ged_search(&g, &c, &cfg, Budget::unlimited());
        prop_assert!(r.exact);
        prop_assert!((r.distance - oracle.distance).abs() <= 1e-9, "{} vs {}", r.distance, oracle.distance);
        prop_assert_eq!(r.distance, path_sum(&r));
        prop_assert_eq!(oracle.distance, path_sum(&oracle));
    }

    #[test]
    fn more_budget_never_hurts(seed in any::<u64>(), b1 in 0u64..20, extra in 0u64..50) {
        let (g, c) = pair(seed, 12, 14);
        let cfg = CostConfig::default();
        let small = ged_search(&g, &c, &cfg, Budget::expansions(b1));
        let large = ged_search(&g, &c, &cfg, Budget::expansions(b1 + extra));
        prop_assert!(small.distance >= large.distance);
        prop_assert!(small.distance >= 0.0);
        prop_assert_eq!(large.distance, path_sum(&large));
    }
}
