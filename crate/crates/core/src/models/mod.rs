//! The four application models and the spanning-tree model.
//!
//! Each model is an unnormalized density `w` with respect to an easy product
//! measure `μ`:
//!
//! | model          | dims  | μ per dimension              | w(x)                             |
//! |----------------|-------|------------------------------|----------------------------------|
//! | hard-core      | nodes | Bern(λ/(1+λ))                | ∏ (1 − x(i)x(j))                 |
//! | Strauss        | nodes | Bern(λ/(1+λ))                | ∏ α^{x(i)x(j)}                   |
//! | autonormal     | nodes | N(y(i), 1/(2J)) on [0, 1]    | exp(−β Σ (x(i) − x(j))²)         |
//! | random cluster | edges | Bern(p)                      | q^{c(x)}                         |
//!
//! Products and sums run over the edges of the graph. `0⁰ = 1` throughout.

mod autonormal;
mod backbone;
mod hardcore;
mod potts;
mod random_cluster;
mod strauss;
mod threshold;

use std::fmt;
use std::str::FromStr;

pub use autonormal::{AutonormalCheck, AutonormalContract};
pub use backbone::{backbone_sample_two_color, BackboneSampler};
pub use hardcore::HardcoreContract;
pub use potts::cluster_to_potts;
pub use random_cluster::{RandomClusterCheck, RandomClusterContract};
pub use strauss::{StraussCheck, StraussContract};
pub use threshold::{
    critical_lambda_hardcore, gamma_hardcore, subcritical_check, threshold_for_delta, ReferenceRow,
    ThresholdReport, REFERENCE_TABLE,
};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HardcoreParams {
    lambda: f64,
}

impl HardcoreParams {
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::param(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// P(X(v) = 1) under μ.
    pub fn activity(&self) -> f64 {
        self.lambda / (1.0 + self.lambda)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StraussParams {
    lambda: f64,
    alpha: f64,
}

impl StraussParams {
    pub fn new(lambda: f64, alpha: f64) -> Result<Self> {
        HardcoreParams::new(lambda)?;
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::param(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        Ok(Self { lambda, alpha })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn activity(&self) -> f64 {
        self.lambda / (1.0 + self.lambda)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AutonormalParams {
    j: f64,
    beta: f64,
    y: Vec<f64>,
}

impl AutonormalParams {
    /// `y` holds one value per node.
    pub fn new(j: f64, beta: f64, y: Vec<f64>) -> Result<Self> {
        if !j.is_finite() || j <= 0.0 {
            return Err(Error::param(format!("J must be finite and > 0, got {j}")));
        }
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::param(format!("beta must be finite and >= 0, got {beta}")));
        }
        if let Some(bad) = y.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::param(format!("y values must lie in [0, 1], got {bad}")));
        }
        Ok(Self { j, beta, y })
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Variance `1/(2J)` of each node's untruncated normal.
    pub fn variance(&self) -> f64 {
        1.0 / (2.0 * self.j)
    }

    /// Broadcast a single `y` value to `n` nodes; other lengths must match.
    pub fn fitted_to(&self, n: usize) -> Result<Self> {
        match self.y.len() {
            len if len == n => Ok(self.clone()),
            1 => Ok(Self { y: vec![self.y[0]; n], ..self.clone() }),
            len => Err(Error::LengthMismatch { expected: n, actual: len }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomClusterParams {
    p: f64,
    q: f64,
}

impl RandomClusterParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::param(format!("p must lie in (0, 1), got {p}")));
        }
        if !q.is_finite() || q < 1.0 {
            return Err(Error::param(format!("q must be finite and >= 1, got {q}")));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

/// A model with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec {
    Hardcore(HardcoreParams),
    Strauss(StraussParams),
    Autonormal(AutonormalParams),
    RandomCluster(RandomClusterParams),
    /// Uniform rooted spanning trees, directed toward `root`.
    Wilson { root: usize },
}

/// What a model's dimensions index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimensionKind {
    Nodes,
    Edges,
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Hardcore(_) => "hardcore",
            ModelSpec::Strauss(_) => "strauss",
            ModelSpec::Autonormal(_) => "autonormal",
            ModelSpec::RandomCluster(_) => "random-cluster",
            ModelSpec::Wilson { .. } => "wilson",
        }
    }

    pub fn dimension_kind(&self) -> DimensionKind {
        match self {
            ModelSpec::RandomCluster(_) => DimensionKind::Edges,
            _ => DimensionKind::Nodes,
        }
    }

    pub fn dimension_count(&self, g: &Graph) -> usize {
        match self.dimension_kind() {
            DimensionKind::Nodes => g.node_count(),
            DimensionKind::Edges => g.edge_count(),
        }
    }

    pub fn is_binary(&self) -> bool {
        matches!(
            self,
            ModelSpec::Hardcore(_) | ModelSpec::Strauss(_) | ModelSpec::RandomCluster(_)
        )
    }

    /// Checks the pairing of this model with `g` (node-indexed parameters,
    /// root range).
    pub fn validate_for(&self, g: &Graph) -> Result<()> {
        match self {
            ModelSpec::Autonormal(p) => p.fitted_to(g.node_count()).map(|_| ()),
            ModelSpec::Wilson { root } if *root >= g.node_count() => Err(Error::NodeOutOfRange {
                node: *root,
                node_count: g.node_count(),
            }),
            _ => Ok(()),
        }
    }
}

/// Parses `name:key=value,key=value`. Names: `hardcore`, `strauss`,
/// `autonormal`, `random-cluster` (or `rc`), `wilson`. Autonormal `y` is a
/// `/`-separated list or one value for every node.
impl FromStr for ModelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params: Vec<(String, String)> = Vec::new();
        for kv in rest.split(',').map(str::trim).filter(|kv| !kv.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("model parameter '{kv}' is not key=value")))?;
            params.push((k.trim().to_ascii_lowercase(), v.trim().to_string()));
        }
        let take = |key: &str| -> Result<&str> {
            params
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| Error::Parse(format!("model '{name}' needs parameter '{key}'")))
        };
        let num = |key: &str| -> Result<f64> {
            let v = take(key)?;
            v.parse::<f64>()
                .map_err(|e| Error::Parse(format!("parameter {key}='{v}': {e}")))
        };
        let allowed: &[&str] = match name {
            "hardcore" | "hard-core" => &["lambda"],
            "strauss" => &["lambda", "alpha"],
            "autonormal" => &["j", "beta", "y"],
            "random-cluster" | "random_cluster" | "rc" => &["p", "q"],
            "wilson" => &["root"],
            other => return Err(Error::Parse(format!("unknown model '{other}'"))),
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(Error::Parse(format!("model '{name}' has no parameter '{k}'")));
        }
        Ok(match name {
            "hardcore" | "hard-core" => ModelSpec::Hardcore(HardcoreParams::new(num("lambda")?)?),
            "strauss" => ModelSpec::Strauss(StraussParams::new(num("lambda")?, num("alpha")?)?),
            "autonormal" => {
                let y = take("y")?
                    .split('/')
                    .map(|t| {
                        t.trim()
                            .parse::<f64>()
                            .map_err(|e| Error::Parse(format!("y value '{t}': {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                ModelSpec::Autonormal(AutonormalParams::new(num("j")?, num("beta")?, y)?)
            }
            "wilson" => {
                let v = take("root")?;
                let root = v
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("root '{v}': {e}")))?;
                ModelSpec::Wilson { root }
            }
            _ => ModelSpec::RandomCluster(RandomClusterParams::new(num("p")?, num("q")?)?),
        })
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Hardcore(p) => write!(f, "hardcore:lambda={}", p.lambda),
            ModelSpec::Strauss(p) => write!(f, "strauss:lambda={},alpha={}", p.lambda, p.alpha),
            ModelSpec::Autonormal(p) => {
                let y: Vec<String> = p.y.iter().map(f64::to_string).collect();
                write!(f, "autonormal:J={},beta={},y={}", p.j, p.beta, y.join("/"))
            }
            ModelSpec::RandomCluster(p) => write!(f, "random-cluster:p={},q={}", p.p, p.q),
            ModelSpec::Wilson { root } => write!(f, "wilson:root={root}"),
        }
    }
}

/// A full assignment of labels to a model's dimensions.
#[derive(Clone, Debug, PartialEq)]
pub enum Configuration {
    Bits(Vec<bool>),
    Reals(Vec<f64>),
}

impl Configuration {
    pub fn len(&self) -> usize {
        match self {
            Configuration::Bits(b) => b.len(),
            Configuration::Reals(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn expect_bits<'a>(config: &'a Configuration, len: usize, what: &str) -> Result<&'a [bool]> {
    match config {
        Configuration::Bits(b) if b.len() == len => Ok(b),
        Configuration::Bits(b) => Err(Error::LengthMismatch { expected: len, actual: b.len() }),
        Configuration::Reals(_) => Err(Error::param(format!("{what} expects a bit configuration"))),
    }
}

/// `w(x)` with respect to μ.
pub fn weight(model: &ModelSpec, g: &Graph, config: &Configuration) -> Result<f64> {
    match model {
        ModelSpec::Hardcore(_) => {
            let x = expect_bits(config, g.node_count(), "hard-core")?;
            Ok(hardcore::weight(g, x))
        }
        ModelSpec::Strauss(p) => {
            let x = expect_bits(config, g.node_count(), "Strauss")?;
            Ok(strauss::weight(g, p.alpha, x))
        }
        ModelSpec::Autonormal(p) => {
            let x = match config {
                Configuration::Reals(r) if r.len() == g.node_count() => r,
                Configuration::Reals(r) => {
                    return Err(Error::LengthMismatch { expected: g.node_count(), actual: r.len() })
                }
                Configuration::Bits(_) => {
                    return Err(Error::param("autonormal expects a real-valued configuration"))
                }
            };
            if let Some(bad) = x.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::param(format!("autonormal label {bad} not in [0, 1]")));
            }
            Ok(autonormal::weight(g, p.beta, x))
        }
        ModelSpec::RandomCluster(p) => {
            let x = expect_bits(config, g.edge_count(), "random cluster")?;
            Ok(p.q.powi(g.count_components(x)? as i32))
        }
        ModelSpec::Wilson { .. } => Err(Error::param(
            "spanning trees are weighted by the rooted-tree indicator; see wilson::is_rooted_tree",
        )),
    }
}

/// An independent draw from μ.
pub fn mu_sample(model: &ModelSpec, g: &Graph, rng: &mut RngStream) -> Result<Configuration> {
    model.validate_for(g)?;
    Ok(match model {
        ModelSpec::Hardcore(p) => {
            Configuration::Bits((0..g.node_count()).map(|_| rng.bernoulli_unchecked(p.activity())).collect())
        }
        ModelSpec::Strauss(p) => {
            Configuration::Bits((0..g.node_count()).map(|_| rng.bernoulli_unchecked(p.activity())).collect())
        }
        ModelSpec::Autonormal(p) => {
            let p = p.fitted_to(g.node_count())?;
            Configuration::Reals(
                p.y.iter()
                    .map(|&y| rng.truncated_normal(y, p.variance()))
                    .collect::<Result<_>>()?,
            )
        }
        ModelSpec::RandomCluster(p) => {
            Configuration::Bits((0..g.edge_count()).map(|_| rng.bernoulli_unchecked(p.p)).collect())
        }
        ModelSpec::Wilson { .. } => {
            return Err(Error::param("use wilson::WilsonArTarget for the spanning-tree base measure"))
        }
    })
}
