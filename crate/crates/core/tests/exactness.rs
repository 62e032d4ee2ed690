//! End-to-end sampler checks against enumeration and quadrature oracles.

mod common;

use prar::bench::{run_bench, BenchPlan};
use prar::engine::{plain_ar_sample, prar_sample, EngineOptions};
use prar::graph::{Generator, Graph};
use prar::models::{
    mu_sample, AutonormalParams, Configuration, HardcoreContract, HardcoreParams, ModelSpec, RandomClusterContract,
    RandomClusterParams,
};
use prar::oracle::{
    autonormal_moments_numeric, chi_square, empirical_probs, enumerate_distribution, enumerate_rooted_trees,
    tv_distance,
};
use prar::rng::RngStream;
use prar::sampler::{Method, Sampler};
use prar::wilson::is_rooted_tree;

use common::{all_bits, bit_counts, code, mean_se, probs_from_map, real_draws, tree_counts};

fn graph(spec: &str) -> Graph {
    Graph::generate(spec.parse::<Generator>().unwrap()).unwrap()
}

fn model(spec: &str) -> ModelSpec {
    spec.parse().unwrap()
}

/// Samples the labels on `target` and compares them with the oracle
/// marginal by TV and chi-square.
fn assert_matches_oracle(spec: &str, gs: &str, target: &[usize], method: Method, n: u64, seed: u64) {
    let g = graph(gs);
    let m = model(spec);
    let oracle = enumerate_distribution(&m, &g).unwrap().marginal(target).unwrap();
    let counts = bit_counts(&m, &g, method, target, n, seed);
    let tv = tv_distance(&empirical_probs(&counts), oracle.probs()).unwrap();
    let chi = chi_square(&counts, oracle.probs(), n).unwrap();
    assert!(tv < 0.01, "{spec} on {gs} {target:?} via {method}: tv {tv}");
    assert!(chi.p_value > 0.001, "{spec} on {gs} {target:?} via {method}: {chi:?}");
}

#[test]
fn empty_target_costs_one_attempt() {
    let g = graph("grid:3x3");
    let c = HardcoreContract::new(&g, HardcoreParams::new(1.0).unwrap());
    let (a, stats) = prar_sample(&c, &[], &mut RngStream::new(1), EngineOptions::default()).unwrap();
    assert!(a.is_empty());
    assert_eq!(stats.attempts, 1);
    assert_eq!(stats.draws.total(), 0);
}

#[test]
fn single_node_is_a_fair_coin_at_lambda_one() {
    let g = Graph::new(1, &[]).unwrap();
    let counts = bit_counts(&model("hardcore:lambda=1"), &g, Method::Prar, &[0], 100_000, 2);
    let freq = counts[1] as f64 / 1e5;
    assert!((freq - 0.5).abs() < 0.005, "{freq}");
}

#[test]
fn first_node_of_an_edge_is_occupied_a_third_of_the_time() {
    let g = graph("path:2");
    for method in [Method::Prar, Method::Backbone] {
        let counts = bit_counts(&model("hardcore:lambda=1"), &g, method, &[0], 200_000, 3);
        let freq = counts[1] as f64 / 2e5;
        assert!((freq - 1.0 / 3.0).abs() < 0.005, "{method}: {freq}");
    }
}

#[test]
fn joint_on_an_edge_is_uniform_on_independent_sets() {
    for method in [Method::Prar, Method::Backbone, Method::PlainAr] {
        let counts = bit_counts(&model("hardcore:lambda=1"), &graph("path:2"), method, &[0, 1], 150_000, 4);
        assert_eq!(counts[3], 0);
        for c in &counts[..3] {
            assert!((*c as f64 / 150_000.0 - 1.0 / 3.0).abs() < 0.006, "{method}: {counts:?}");
        }
    }
}

#[test]
fn plain_ar_accepts_at_once_when_the_weight_is_flat() {
    let mut rng = RngStream::new(5);
    let edgeless = Graph::new(5, &[]).unwrap();
    let hc = HardcoreContract::new(&edgeless, HardcoreParams::new(2.0).unwrap());
    let tri = graph("complete:3");
    let rc = RandomClusterContract::new(&tri, RandomClusterParams::new(0.4, 1.0).unwrap());
    for _ in 0..1000 {
        assert_eq!(plain_ar_sample(&hc, &mut rng, EngineOptions::default()).unwrap().1.attempts, 1);
        assert_eq!(plain_ar_sample(&rc, &mut rng, EngineOptions::default()).unwrap().1.attempts, 1);
    }
}

#[test]
fn marginals_on_target_subsets() {
    let cases = [
        ("hardcore:lambda=2", "grid:3x3", vec![0, 4, 8]),
        ("hardcore:lambda=0.7", "cycle:7", vec![3]),
        ("strauss:lambda=1.5,alpha=0.3", "grid:3x3", vec![1, 4]),
        ("strauss:lambda=0.5,alpha=0.8", "complete:5", vec![0, 1, 2, 3, 4]),
        ("rc:p=0.6,q=3", "grid:2x2", vec![1, 2]),
        ("rc:p=0.3,q=1.5", "grid:2x3", vec![0, 3, 6]),
        ("rc:p=0.5,q=4", "complete:4", vec![0, 1, 2, 3, 4, 5]),
    ];
    for (k, (spec, gs, target)) in cases.iter().enumerate() {
        assert_matches_oracle(spec, gs, target, Method::Prar, 100_000, 100 + k as u64);
    }
}

#[test]
fn backbone_marginals_on_target_subsets() {
    let cases = [
        ("hardcore:lambda=2", "grid:3x3", vec![0, 4, 8]),
        ("hardcore:lambda=1", "grid:2x3", vec![0, 1, 2, 3, 4, 5]),
        ("strauss:lambda=1.5,alpha=0.3", "grid:3x3", vec![1, 4]),
        ("strauss:lambda=0.8,alpha=0.5", "complete:3", vec![0, 1, 2]),
    ];
    for (k, (spec, gs, target)) in cases.iter().enumerate() {
        assert_matches_oracle(spec, gs, target, Method::Backbone, 100_000, 200 + k as u64);
    }
}

#[test]
fn plain_ar_matches_the_oracle() {
    assert_matches_oracle("hardcore:lambda=1", "grid:2x3", &[0, 1, 2, 3, 4, 5], Method::PlainAr, 100_000, 300);
    assert_matches_oracle("rc:p=0.6,q=3", "grid:2x2", &[0, 1, 2, 3], Method::PlainAr, 100_000, 301);
}

#[test]
fn strauss_without_penalty_is_iid() {
    let g = graph("cycle:4");
    let counts = bit_counts(&model("strauss:lambda=1,alpha=1"), &g, Method::Prar, &[0, 1, 2, 3], 100_000, 6);
    let uniform = vec![1.0 / 16.0; 16];
    let chi = chi_square(&counts, &uniform, 100_000).unwrap();
    assert!(chi.p_value > 0.001, "{chi:?}");
}

#[test]
fn random_cluster_limits() {
    let g = graph("grid:3x3");
    let sparse = Sampler::new(model("rc:p=0.000001,q=2"), &g, EngineOptions::default(), Method::Prar).unwrap();
    let mut rng = RngStream::new(7);
    let dims: Vec<usize> = (0..g.edge_count()).collect();
    for _ in 0..10_000 {
        let (d, _) = sparse.draw(None, &mut rng).unwrap();
        assert!(d.bits(&dims).unwrap().iter().all(|b| !b));
    }

    let dense = ModelSpec::RandomCluster(RandomClusterParams::new(1.0 - 1e-12, 2.0).unwrap());
    for _ in 0..1000 {
        assert_eq!(mu_sample(&dense, &g, &mut rng).unwrap(), Configuration::Bits(vec![true; 12]));
    }
}

#[test]
fn random_cluster_with_q_one_never_rejects() {
    let g = graph("grid:3x3");
    let s = Sampler::new(model("rc:p=0.7,q=1"), &g, EngineOptions::default(), Method::Prar).unwrap();
    let mut rng = RngStream::new(8);
    for _ in 0..2000 {
        let (_, stats) = s.draw(None, &mut rng).unwrap();
        assert_eq!((stats.attempts, stats.rejections), (1, 0));
    }
}

#[test]
fn autonormal_means_match_quadrature() {
    let cases = [
        ("path:2", AutonormalParams::new(1.0, 0.0, vec![0.2, 0.8]).unwrap()),
        ("complete:3", AutonormalParams::new(2.0, 1.5, vec![0.1, 0.5, 0.9]).unwrap()),
        ("path:2", AutonormalParams::new(0.5, 3.0, vec![0.0, 1.0]).unwrap()),
    ];
    for (k, (gs, params)) in cases.into_iter().enumerate() {
        let g = graph(gs);
        let oracle = autonormal_moments_numeric(&params, &g).unwrap();
        for method in [Method::Prar, Method::PlainAr] {
            let (xs, _) = real_draws(&ModelSpec::Autonormal(params.clone()), &g, method, 60_000, 400 + k as u64);
            for (i, &(target, var)) in oracle.iter().enumerate() {
                let (mean, se) = mean_se(&xs, i);
                assert!((mean - target).abs() <= 3.5 * se, "{gs} node {i} via {method}: {mean} vs {target}");
                let v = xs.iter().map(|x| (x[i] - mean).powi(2)).sum::<f64>() / xs.len() as f64;
                assert!((v - var).abs() < 0.05 * var + 1e-3, "{gs} node {i} variance {v} vs {var}");
            }
        }
    }
}

#[test]
fn wilson_on_a_triangle_is_uniform() {
    let g = graph("complete:3");
    let trees = enumerate_rooted_trees(&g, 0).unwrap();
    assert_eq!(trees.len(), 3);
    let counts = tree_counts(&g, 0, Method::Prar, 30_000, 9);
    for f in probs_from_map(&trees, &counts) {
        assert!((f - 1.0 / 3.0).abs() <= 0.01, "{f}");
    }
    assert!(counts.keys().all(|t| is_rooted_tree(&g, t)));
}

#[test]
fn wilson_on_a_grid_with_another_root() {
    let g = graph("grid:2x3");
    let trees = enumerate_rooted_trees(&g, 4).unwrap();
    assert_eq!(trees.len(), 15);
    let counts = tree_counts(&g, 4, Method::Prar, 60_000, 10);
    let observed: Vec<u64> = trees.iter().map(|t| counts.get(t).copied().unwrap_or(0)).collect();
    assert_eq!(observed.iter().sum::<u64>(), 60_000);
    let chi = chi_square(&observed, &[1.0 / 15.0; 15], 60_000).unwrap();
    assert!(chi.p_value > 0.001, "{chi:?}");
}

#[test]
fn ignoring_rejections_is_caught() {
    let g = graph("path:2");
    let m = model("hardcore:lambda=1");
    let oracle = enumerate_distribution(&m, &g).unwrap();
    let opts = EngineOptions { ignore_rejections: true, ..EngineOptions::default() };
    let s = Sampler::new(m, &g, opts, Method::Prar).unwrap();
    let mut rng = RngStream::new(11);
    let mut counts = vec![0u64; 4];
    for _ in 0..50_000 {
        let (d, _) = s.draw(None, &mut rng).unwrap();
        counts[code(&d.bits(&[0, 1]).unwrap())] += 1;
    }
    let tv = tv_distance(&empirical_probs(&counts), oracle.probs()).unwrap();
    assert!(tv > 0.05, "{tv}");
}

#[test]
fn oracle_reduces_to_product_measures() {
    let g = graph("grid:2x3");
    let cases = [("rc:p=0.3,q=1", 0.3, true), ("strauss:lambda=2,alpha=1", 2.0 / 3.0, false), ("hardcore:lambda=0", 0.0, false)];
    for (spec, p, edges) in cases {
        let m = model(spec);
        let dims = if edges { g.edge_count() } else { g.node_count() };
        let oracle = enumerate_distribution(&m, &g).unwrap();
        for bits in all_bits(dims) {
            let product: f64 = bits.iter().map(|&b| if b { p } else { 1.0 - p }).product();
            assert!((oracle.probs()[code(&bits)] - product).abs() <= 1e-12, "{spec}");
        }
    }
}

#[test]
fn random_cluster_cost_per_edge_is_flat() {
    let records = run_bench(&BenchPlan {
        model: model("rc:p=0.3,q=2"),
        family: Generator::Cycle(0),
        sizes: vec![1_000, 10_000],
        replications: 40,
        seed: 12,
        options: EngineOptions::default(),
        method: Method::Prar,
    })
    .unwrap();
    let (a, b) = (records[0].draws_per_dim, records[1].draws_per_dim);
    assert!((a - b).abs() <= 0.1 * a.min(b), "{a} vs {b}");
}
