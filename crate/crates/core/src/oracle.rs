//! Ground truth for small instances, and the statistics used to compare
//! samplers against it.
//!
//! Binary configurations are keyed by a canonical code: dimension 0 is the
//! most significant bit, so sorting codes sorts the bit strings
//! lexicographically, and the bit string of a code is the configuration
//! written in dimension order.

use std::fmt::Write as _;

use statrs::function::gamma::gamma_ur;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::models::{weight, AutonormalParams, Configuration, ModelSpec};
use crate::wilson::{is_rooted_tree, RootedTree};

/// Largest number of binary dimensions [`enumerate_distribution`] accepts.
pub const MAX_ENUMERATED_DIMS: usize = 22;
/// Largest graph [`autonormal_moments_numeric`] integrates over.
pub const MAX_QUADRATURE_NODES: usize = 3;
/// Largest graph [`enumerate_rooted_trees`] accepts.
pub const MAX_TREE_NODES: usize = 10;
/// Refuse to list more trees than this.
pub const MAX_TREE_COUNT: u64 = 2_000_000;

/// Canonical code of a bit configuration.
pub fn encode_bits(bits: &[bool]) -> u64 {
    debug_assert!(bits.len() <= 64);
    bits.iter().fold(0, |acc, &b| acc << 1 | u64::from(b))
}

pub fn decode_bits(code: u64, dims: usize) -> Vec<bool> {
    (0..dims).map(|i| code >> (dims - 1 - i) & 1 == 1).collect()
}

pub fn bit_string(code: u64, dims: usize) -> String {
    decode_bits(code, dims)
        .into_iter()
        .map(|b| if b { '1' } else { '0' })
        .collect()
}

/// An exactly normalized distribution over every bit configuration of a
/// fixed number of dimensions, in canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleDistribution {
    dims: usize,
    probs: Vec<f64>,
}

impl OracleDistribution {
    /// Normalizes `weights` (one per code, in canonical order).
    pub fn from_weights(dims: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != 1usize << dims {
            return Err(Error::LengthMismatch { expected: 1 << dims, actual: weights.len() });
        }
        let total: f64 = weights.iter().sum();
        if !total.is_finite() || total <= 0.0 {
            return Err(Error::param("weights must have a positive finite sum"));
        }
        Ok(Self {
            dims,
            probs: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    /// Probabilities indexed by canonical code.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, bits: &[bool]) -> f64 {
        self.probs[encode_bits(bits) as usize]
    }

    /// Configurations with their probabilities, in canonical order.
    pub fn support(&self) -> impl Iterator<Item = (Vec<bool>, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(|(code, &p)| (decode_bits(code as u64, self.dims), p))
    }

    /// The joint law of `dims` (in the order given).
    pub fn marginal(&self, dims: &[usize]) -> Result<Self> {
        if let Some(&bad) = dims.iter().find(|&&d| d >= self.dims) {
            return Err(Error::param(format!("dimension {bad} out of range")));
        }
        let mut out = vec![0.0; 1 << dims.len()];
        for (code, &p) in self.probs.iter().enumerate() {
            let bits = decode_bits(code as u64, self.dims);
            let sub: Vec<bool> = dims.iter().map(|&d| bits[d]).collect();
            out[encode_bits(&sub) as usize] += p;
        }
        Ok(Self { dims: dims.len(), probs: out })
    }

    /// One `config_bits probability` line per configuration.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (code, p) in self.probs.iter().enumerate() {
            let _ = writeln!(out, "{} {:.17e}", bit_string(code as u64, self.dims), p);
        }
        out
    }
}

/// `μ({x}) · w(x)`, normalized, for a binary model on a small graph.
pub fn enumerate_distribution(model: &ModelSpec, g: &Graph) -> Result<OracleDistribution> {
    let activity = match model {
        ModelSpec::Hardcore(p) => p.activity(),
        ModelSpec::Strauss(p) => p.activity(),
        ModelSpec::RandomCluster(p) => p.p(),
        other => {
            return Err(Error::param(format!(
                "enumeration needs a binary model, got {}",
                other.name()
            )))
        }
    };
    let dims = model.dimension_count(g);
    if dims > MAX_ENUMERATED_DIMS {
        return Err(Error::OracleLimit(format!(
            "{dims} dimensions exceeds the enumeration cap of {MAX_ENUMERATED_DIMS}"
        )));
    }
    let weights = (0..1u64 << dims)
        .map(|code| {
            let bits = decode_bits(code, dims);
            let mu: f64 = bits
                .iter()
                .map(|&b| if b { activity } else { 1.0 - activity })
                .product();
            Ok(mu * weight(model, g, &Configuration::Bits(bits))?)
        })
        .collect::<Result<Vec<_>>>()?;
    OracleDistribution::from_weights(dims, weights)
}

/// Counts of sampled bit configurations, keyed like [`OracleDistribution`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram {
    dims: usize,
    counts: Vec<u64>,
    total: u64,
}

impl Histogram {
    pub fn new(dims: usize) -> Result<Self> {
        if dims > MAX_ENUMERATED_DIMS {
            return Err(Error::OracleLimit(format!("{dims} dimensions is too many for a histogram")));
        }
        Ok(Self { dims, counts: vec![0; 1 << dims], total: 0 })
    }

    pub fn add(&mut self, bits: &[bool]) -> Result<()> {
        if bits.len() != self.dims {
            return Err(Error::LengthMismatch { expected: self.dims, actual: bits.len() });
        }
        self.counts[encode_bits(bits) as usize] += 1;
        self.total += 1;
        Ok(())
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn probs(&self) -> Vec<f64> {
        empirical_probs(&self.counts)
    }
}

pub fn empirical_probs(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return vec![0.0; counts.len()];
    }
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

/// Half the L1 distance between two probability vectors on the same cells.
pub fn tv_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::SupportMismatch(format!("{} cells vs {} cells", a.len(), b.len())));
    }
    Ok(0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson's goodness-of-fit test. Cells with zero expected probability
/// take no part as long as they are empty; a hit on one is an error, since
/// the statistic is then undefined.
pub fn chi_square(counts: &[u64], probs: &[f64], n: u64) -> Result<ChiSquare> {
    if counts.len() != probs.len() {
        return Err(Error::SupportMismatch(format!(
            "{} observed cells vs {} expected",
            counts.len(),
            probs.len()
        )));
    }
    let total: u64 = counts.iter().sum();
    if total != n {
        return Err(Error::param(format!("counts sum to {total}, expected {n}")));
    }
    let mut statistic = 0.0;
    let mut cells = 0usize;
    for (i, (&c, &p)) in counts.iter().zip(probs).enumerate() {
        if p <= 0.0 {
            if c > 0 {
                return Err(Error::SupportMismatch(format!(
                    "cell {i} has zero expected probability but {c} observations"
                )));
            }
            continue;
        }
        let expected = p * n as f64;
        statistic += (c as f64 - expected).powi(2) / expected;
        cells += 1;
    }
    let dof = cells.saturating_sub(1);
    let p_value = if dof == 0 || statistic <= 0.0 {
        1.0
    } else {
        gamma_ur(dof as f64 / 2.0, statistic / 2.0)
    };
    Ok(ChiSquare { statistic, dof, p_value })
}

/// Per-node mean and variance of the autonormal model on at most three
/// nodes, by midpoint tensor-grid quadrature. The grid starts at 400 points
/// per axis and doubles until every moment moves by less than `1e-4`.
pub fn autonormal_moments_numeric(params: &AutonormalParams, g: &Graph) -> Result<Vec<(f64, f64)>> {
    let n = g.node_count();
    if n > MAX_QUADRATURE_NODES {
        return Err(Error::OracleLimit(format!(
            "{n} nodes exceeds the quadrature cap of {MAX_QUADRATURE_NODES}"
        )));
    }
    let params = params.fitted_to(n)?;
    let mut k = 400;
    let mut prev = quadrature_moments(&params, g, k);
    // A 3-D grid at 3200 points per axis is already 3·10¹⁰ evaluations.
    let max_k = if n <= 2 { 12_800 } else { 1_600 };
    loop {
        k *= 2;
        let next = quadrature_moments(&params, g, k);
        let change = prev
            .iter()
            .zip(&next)
            .map(|(a, b)| (a.0 - b.0).abs().max((a.1 - b.1).abs()))
            .fold(0.0, f64::max);
        if change < 1e-4 {
            return Ok(next);
        }
        if k >= max_k {
            return Err(Error::OracleLimit(format!(
                "quadrature did not settle below 1e-4 (last change {change:.2e})"
            )));
        }
        prev = next;
    }
}

fn quadrature_moments(params: &AutonormalParams, g: &Graph, k: usize) -> Vec<(f64, f64)> {
    let n = g.node_count();
    if n == 0 {
        return Vec::new();
    }
    let h = 1.0 / k as f64;
    let xs: Vec<f64> = (0..k).map(|i| (i as f64 + 0.5) * h).collect();
    let node_factor: Vec<Vec<f64>> = params
        .y()
        .iter()
        .map(|&y| xs.iter().map(|&x| (-params.j() * (x - y).powi(2)).exp()).collect())
        .collect();
    let pair: Vec<f64> = (0..k * k)
        .map(|ab| (-params.beta() * (xs[ab / k] - xs[ab % k]).powi(2)).exp())
        .collect();

    let mut z = 0.0;
    let mut m1 = vec![0.0; n];
    let mut m2 = vec![0.0; n];
    let mut idx = vec![0usize; n];
    loop {
        let mut w: f64 = (0..n).map(|v| node_factor[v][idx[v]]).product();
        for &(a, b) in g.edges() {
            w *= pair[idx[a] * k + idx[b]];
        }
        z += w;
        for v in 0..n {
            let x = xs[idx[v]];
            m1[v] += w * x;
            m2[v] += w * x * x;
        }
        // Odometer over the grid.
        let mut d = 0;
        loop {
            idx[d] += 1;
            if idx[d] < k {
                break;
            }
            idx[d] = 0;
            d += 1;
            if d == n {
                return (0..n)
                    .map(|v| {
                        let mean = m1[v] / z;
                        (mean, m2[v] / z - mean * mean)
                    })
                    .collect();
            }
        }
    }
}

/// Number of spanning trees of `g` by the matrix-tree theorem: the
/// determinant of the Laplacian with `root`'s row and column removed,
/// computed exactly with fraction-free elimination.
pub fn matrix_tree_count(g: &Graph, root: usize) -> Result<u128> {
    let n = g.node_count();
    if root >= n {
        return Err(Error::NodeOutOfRange { node: root, node_count: n });
    }
    let keep: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    let size = keep.len();
    if size == 0 {
        return Ok(1);
    }
    let pos = |v: usize| if v < root { v } else { v - 1 };
    let mut a = vec![vec![0i128; size]; size];
    for (r, &v) in keep.iter().enumerate() {
        a[r][r] = g.degree(v) as i128;
        for &w in g.neighbors(v) {
            if w != root {
                a[r][pos(w)] -= 1;
            }
        }
    }
    // Bareiss elimination.
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..size - 1 {
        if a[k][k] == 0 {
            match (k + 1..size).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    let det = sign * a[size - 1][size - 1];
    Ok(det.max(0) as u128)
}

/// Every spanning tree of `g` directed toward `root`, in lexicographic
/// order of parent maps. The count is checked against [`matrix_tree_count`].
pub fn enumerate_rooted_trees(g: &Graph, root: usize) -> Result<Vec<RootedTree>> {
    let n = g.node_count();
    if n > MAX_TREE_NODES {
        return Err(Error::OracleLimit(format!(
            "{n} nodes exceeds the tree enumeration cap of {MAX_TREE_NODES}"
        )));
    }
    let expected = matrix_tree_count(g, root)?;
    if expected > u128::from(MAX_TREE_COUNT) {
        return Err(Error::OracleLimit(format!("{expected} spanning trees is too many to list")));
    }
    let mut trees = Vec::with_capacity(expected as usize);
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut choice = vec![0usize; n];
    // Depth-first over nodes in id order; a partial map is extended only if
    // the new arc closes no cycle among assigned arcs.
    let order: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    let closes_cycle = |parent: &[Option<usize>], v: usize| {
        let mut u = v;
        while let Some(p) = parent[u] {
            u = p;
            if u == v {
                return true;
            }
        }
        false
    };
    let mut depth = 0;
    loop {
        if depth == order.len() {
            let t = RootedTree::new(root, parent.clone());
            debug_assert!(is_rooted_tree(g, &t));
            trees.push(t);
            if depth == 0 {
                break;
            }
            depth -= 1;
            choice[order[depth]] += 1;
            parent[order[depth]] = None;
            continue;
        }
        let v = order[depth];
        let nbrs = g.neighbors(v);
        let mut placed = false;
        while choice[v] < nbrs.len() {
            parent[v] = Some(nbrs[choice[v]]);
            if !closes_cycle(&parent, v) {
                placed = true;
                break;
            }
            parent[v] = None;
            choice[v] += 1;
        }
        if placed {
            depth += 1;
            continue;
        }
        choice[v] = 0;
        if depth == 0 {
            break;
        }
        depth -= 1;
        choice[order[depth]] += 1;
        parent[order[depth]] = None;
    }
    if trees.len() as u128 != expected {
        return Err(Error::OracleLimit(format!(
            "enumerated {} trees but the matrix-tree theorem gives {expected}",
            trees.len()
        )));
    }
    Ok(trees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Generator;

    fn g(kind: Generator) -> Graph {
        Graph::generate(kind).unwrap()
    }

    #[test]
    fn codes_are_lexicographic() {
        assert_eq!(encode_bits(&[true, false]), 2);
        assert_eq!(bit_string(2, 2), "10");
        assert_eq!(decode_bits(5, 3), vec![true, false, true]);
    }

    #[test]
    fn hardcore_path_two() {
        let d = enumerate_distribution(&"hardcore:lambda=1".parse().unwrap(), &g(Generator::Path(2))).unwrap();
        let third = 1.0 / 3.0;
        for (got, want) in d.probs().iter().zip([third, third, third, 0.0]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert_eq!(d.dump().lines().next().unwrap().split(' ').next().unwrap(), "00");
    }

    #[test]
    fn product_measure_cases() {
        let tri = g(Generator::Complete(3));
        let rc = enumerate_distribution(&"rc:p=0.5,q=1".parse().unwrap(), &tri).unwrap();
        assert!(rc.probs().iter().all(|p| (p - 0.125).abs() < 1e-12));
        let st = enumerate_distribution(&"strauss:lambda=1,alpha=1".parse().unwrap(), &g(Generator::Path(2))).unwrap();
        assert!(st.probs().iter().all(|p| (p - 0.25).abs() < 1e-12));
        let zero = enumerate_distribution(&"hardcore:lambda=0".parse().unwrap(), &tri).unwrap();
        assert_eq!(zero.probs()[0], 1.0);
    }

    #[test]
    fn marginals_sum_the_joint() {
        let d = enumerate_distribution(&"rc:p=0.25,q=2".parse().unwrap(), &g(Generator::Complete(3))).unwrap();
        let m = d.marginal(&[1]).unwrap();
        let direct: f64 = d.support().filter(|(b, _)| b[1]).map(|(_, p)| p).sum();
        assert!((m.probs()[1] - direct).abs() < 1e-15);
        assert!((m.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn enumeration_caps() {
        let big = g(Generator::Path(23));
        assert!(matches!(
            enumerate_distribution(&"hardcore:lambda=1".parse().unwrap(), &big),
            Err(Error::OracleLimit(_))
        ));
        assert!(enumerate_distribution(&"autonormal:J=1,beta=1,y=0.5".parse().unwrap(), &g(Generator::Path(2))).is_err());
    }

    #[test]
    fn tv_examples() {
        assert_eq!(tv_distance(&[0.5, 0.5], &[0.5, 0.5]).unwrap(), 0.0);
        assert_eq!(tv_distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert_eq!(tv_distance(&[0.5, 0.5], &[0.75, 0.25]).unwrap(), 0.25);
        assert!(tv_distance(&[1.0], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn chi_square_examples() {
        let r = chi_square(&[25, 25, 50], &[0.25, 0.25, 0.5], 100).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        let r = chi_square(&[30, 70], &[0.5, 0.5], 100).unwrap();
        assert!((r.statistic - 16.0).abs() < 1e-12);
        // Upper tail of chi-square(1) at 16 is erfc(sqrt(8)).
        let want = 1.0 - statrs::function::erf::erf(8f64.sqrt());
        assert!((r.p_value - want).abs() < 1e-10);
        assert!(chi_square(&[1, 0], &[0.0, 1.0], 1).is_err());
        assert!(chi_square(&[1, 1], &[0.5, 0.5], 3).is_err());
        assert_eq!(chi_square(&[0, 4], &[0.0, 1.0], 4).unwrap().dof, 0);
    }

    #[test]
    fn chi_square_calibration_on_uniform_sampler() {
        let mut rng = crate::rng::RngStream::new(99);
        let runs = 300;
        let mut passes = 0;
        for _ in 0..runs {
            let mut c = [0u64; 4];
            for _ in 0..10_000 {
                c[rng.index(4)] += 1;
            }
            if chi_square(&c, &[0.25; 4], 10_000).unwrap().p_value > 0.001 {
                passes += 1;
            }
        }
        assert!(passes as f64 >= 0.99 * runs as f64);
    }

    fn truncated_mean(m: f64, v: f64) -> f64 {
        // Closed form of E[X | 0 <= X <= 1] for X ~ N(m, v).
        use statrs::function::erf::erf;
        let s = v.sqrt();
        let phi = |z: f64| (-z * z / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let cdf = |z: f64| 0.5 * (1.0 + erf(z / std::f64::consts::SQRT_2));
        let (a, b) = ((0.0 - m) / s, (1.0 - m) / s);
        m + s * (phi(a) - phi(b)) / (cdf(b) - cdf(a))
    }

    #[test]
    fn quadrature_reduces_to_closed_forms() {
        let one = g(Generator::Path(1));
        let p = AutonormalParams::new(1.0, 3.0, vec![0.5]).unwrap();
        let m = autonormal_moments_numeric(&p, &one).unwrap();
        assert!((m[0].0 - 0.5).abs() < 1e-9);

        let two = g(Generator::Path(2));
        let p = AutonormalParams::new(1.0, 0.0, vec![0.2, 0.8]).unwrap();
        let m = autonormal_moments_numeric(&p, &two).unwrap();
        assert!((m[0].0 - truncated_mean(0.2, 0.5)).abs() < 1e-4);
        assert!((m[1].0 - truncated_mean(0.8, 0.5)).abs() < 1e-4);

        let p = AutonormalParams::new(1.0, 0.5, vec![0.2, 0.8]).unwrap();
        let m = autonormal_moments_numeric(&p, &two).unwrap();
        // Coupling pulls both means toward each other.
        assert!(m[0].0 > truncated_mean(0.2, 0.5) && m[1].0 < truncated_mean(0.8, 0.5));
        assert!((m[0].0 + m[1].0 - 1.0).abs() < 1e-9);
        assert!(autonormal_moments_numeric(&p, &g(Generator::Path(4))).is_err());
    }

    #[test]
    fn tree_counts() {
        assert_eq!(enumerate_rooted_trees(&g(Generator::Path(3)), 0).unwrap().len(), 1);
        assert_eq!(enumerate_rooted_trees(&g(Generator::Complete(3)), 0).unwrap().len(), 3);
        assert_eq!(enumerate_rooted_trees(&g(Generator::Cycle(4)), 0).unwrap().len(), 4);
        assert_eq!(enumerate_rooted_trees(&g(Generator::Complete(4)), 2).unwrap().len(), 16);
        // Cayley: n^(n-2).
        assert_eq!(matrix_tree_count(&g(Generator::Complete(7)), 0).unwrap(), 16_807);
        let grid = g(Generator::Grid { rows: 2, cols: 3 });
        assert_eq!(enumerate_rooted_trees(&grid, 5).unwrap().len(), 15);
        assert!(enumerate_rooted_trees(&g(Generator::Path(11)), 0).is_err());
    }
}
