#![allow(dead_code)]

use std::collections::BTreeMap;

use prar::graph::Graph;
use prar::models::ModelSpec;
use prar::oracle::{encode_bits, Histogram};
use prar::rng::RngStream;
use prar::sampler::{Method, Sampler};
use prar::wilson::RootedTree;
use prar::engine::{EngineOptions, SampleStats};

/// Histogram of `n` draws of the labels on `target`, keyed by the canonical
/// bit code of the projected configuration.
pub fn bit_counts(spec: &ModelSpec, g: &Graph, method: Method, target: &[usize], n: u64, seed: u64) -> Vec<u64> {
    let sampler = Sampler::new(spec.clone(), g, EngineOptions::default(), method).unwrap();
    let mut rng = RngStream::new(seed);
    let mut hist = Histogram::new(target.len()).unwrap();
    for _ in 0..n {
        let (draw, _) = sampler.draw(Some(target), &mut rng).unwrap();
        hist.add(&draw.bits(target).unwrap()).unwrap();
    }
    hist.counts().to_vec()
}

pub fn tree_counts(g: &Graph, root: usize, method: Method, n: u64, seed: u64) -> BTreeMap<RootedTree, u64> {
    let sampler = Sampler::new(ModelSpec::Wilson { root }, g, EngineOptions::default(), method).unwrap();
    let mut rng = RngStream::new(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..n {
        let (draw, _) = sampler.draw(None, &mut rng).unwrap();
        *counts.entry(draw.tree().unwrap().clone()).or_insert(0) += 1;
    }
    counts
}

/// Real-valued draws of every node, plus the per-sample stats.
pub fn real_draws(spec: &ModelSpec, g: &Graph, method: Method, n: u64, seed: u64) -> (Vec<Vec<f64>>, Vec<SampleStats>) {
    let sampler = Sampler::new(spec.clone(), g, EngineOptions::default(), method).unwrap();
    let dims: Vec<usize> = (0..g.node_count()).collect();
    let mut rng = RngStream::new(seed);
    let mut xs = Vec::with_capacity(n as usize);
    let mut stats = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let (draw, s) = sampler.draw(None, &mut rng).unwrap();
        xs.push(draw.reals(&dims).unwrap());
        stats.push(s);
    }
    (xs, stats)
}

pub fn all_bits(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1u64 << n).map(move |c| (0..n).map(|i| c >> (n - 1 - i) & 1 == 1).collect())
}

pub fn code(bits: &[bool]) -> usize {
    encode_bits(bits) as usize
}

/// Sample mean and standard error of column `i`.
pub fn mean_se(xs: &[Vec<f64>], i: usize) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().map(|x| x[i]).sum::<f64>() / n;
    let var = xs.iter().map(|x| (x[i] - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn probs_from_map<K: Ord>(support: &[K], counts: &BTreeMap<K, u64>) -> Vec<f64> {
    let total: u64 = counts.values().sum();
    support
        .iter()
        .map(|k| counts.get(k).copied().unwrap_or(0) as f64 / total as f64)
        .collect()
}
