//! One entry point over every model and sampling method.

use std::fmt;
use std::str::FromStr;

use crate::engine::{
    plain_ar_sample, ArTarget, EngineOptions, ModelContract, PartialAssignment, PrarSampler, SampleStats,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::models::{
    AutonormalContract, BackboneSampler, HardcoreContract, ModelSpec, RandomClusterContract, StraussContract,
};
use crate::rng::RngStream;
use crate::wilson::{wilson_sample, RootedTree, WilsonArTarget};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Method {
    /// The generic recursive engine (cycle popping for spanning trees).
    #[default]
    Prar,
    /// The two-color backbone sampler; hard-core and Strauss only.
    Backbone,
    /// Whole-configuration acceptance rejection.
    PlainAr,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prar" => Ok(Method::Prar),
            "backbone" => Ok(Method::Backbone),
            "ar" | "plain-ar" => Ok(Method::PlainAr),
            other => Err(Error::Parse(format!("unknown method '{other}' (prar, backbone, ar)"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Prar => "prar",
            Method::Backbone => "backbone",
            Method::PlainAr => "ar",
        })
    }
}

/// A draw, shaped by the model.
#[derive(Clone, Debug, PartialEq)]
pub enum Draw {
    Bits(PartialAssignment<bool>),
    Reals(PartialAssignment<f64>),
    Tree(RootedTree),
}

impl Draw {
    /// Bit labels of `dims`, if this is a binary draw covering them.
    pub fn bits(&self, dims: &[usize]) -> Option<Vec<bool>> {
        match self {
            Draw::Bits(a) => a.project(dims),
            _ => None,
        }
    }

    pub fn reals(&self, dims: &[usize]) -> Option<Vec<f64>> {
        match self {
            Draw::Reals(a) => a.project(dims),
            _ => None,
        }
    }

    pub fn tree(&self) -> Option<&RootedTree> {
        match self {
            Draw::Tree(t) => Some(t),
            _ => None,
        }
    }
}

fn full(dims: usize) -> Vec<usize> {
    (0..dims).collect()
}

fn dense<L: Copy>(labels: Vec<L>) -> PartialAssignment<L> {
    let mut a = PartialAssignment::new(labels.len());
    for (d, l) in labels.into_iter().enumerate() {
        a.insert(d, l);
    }
    a
}

fn via_engine<M: ModelContract>(
    model: &M,
    target: &[usize],
    rng: &mut RngStream,
    options: EngineOptions,
) -> Result<(PartialAssignment<M::Label>, SampleStats)> {
    PrarSampler::new(model, options).sample(target, rng)
}

fn via_ar<T: ArTarget>(target: &T, rng: &mut RngStream, options: EngineOptions) -> Result<(PartialAssignment<T::Label>, SampleStats)> {
    plain_ar_sample(target, rng, options).map(|(x, s)| (dense(x), s))
}

/// Samples a model on a graph.
#[derive(Clone, Debug)]
pub struct Sampler<'g> {
    spec: ModelSpec,
    graph: &'g Graph,
    options: EngineOptions,
    method: Method,
}

impl<'g> Sampler<'g> {
    pub fn new(spec: ModelSpec, graph: &'g Graph, options: EngineOptions, method: Method) -> Result<Self> {
        spec.validate_for(graph)?;
        if method == Method::Backbone && !matches!(spec, ModelSpec::Hardcore(_) | ModelSpec::Strauss(_)) {
            return Err(Error::param(format!(
                "the backbone method handles hardcore and strauss, not {}",
                spec.name()
            )));
        }
        if let ModelSpec::Wilson { .. } = spec {
            if !graph.is_connected() {
                return Err(Error::Disconnected);
            }
        }
        Ok(Self { spec, graph, options, method })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn dimension_count(&self) -> usize {
        self.spec.dimension_count(self.graph)
    }

    /// Draw the labels of `target`; `None` means every dimension. Plain AR
    /// and spanning trees always produce full configurations.
    pub fn draw(&self, target: Option<&[usize]>, rng: &mut RngStream) -> Result<(Draw, SampleStats)> {
        let owned;
        let target = match target {
            Some(t) => t,
            None => {
                owned = full(self.dimension_count());
                &owned
            }
        };
        let g = self.graph;
        let opts = self.options;
        let method = self.method;
        match &self.spec {
            ModelSpec::Hardcore(p) => {
                let c = HardcoreContract::new(g, *p);
                match method {
                    Method::Prar => via_engine(&c, target, rng, opts),
                    Method::Backbone => BackboneSampler::new(&self.spec, g, opts)?.sample(target, rng),
                    Method::PlainAr => via_ar(&c, rng, opts),
                }
                .map(|(a, s)| (Draw::Bits(a), s))
            }
            ModelSpec::Strauss(p) => {
                let c = StraussContract::new(g, *p);
                match method {
                    Method::Prar => via_engine(&c, target, rng, opts),
                    Method::Backbone => BackboneSampler::new(&self.spec, g, opts)?.sample(target, rng),
                    Method::PlainAr => via_ar(&c, rng, opts),
                }
                .map(|(a, s)| (Draw::Bits(a), s))
            }
            ModelSpec::RandomCluster(p) => {
                let c = RandomClusterContract::new(g, *p);
                match method {
                    Method::PlainAr => via_ar(&c, rng, opts),
                    _ => via_engine(&c, target, rng, opts),
                }
                .map(|(a, s)| (Draw::Bits(a), s))
            }
            ModelSpec::Autonormal(p) => {
                let c = AutonormalContract::new(g, p)?;
                match method {
                    Method::PlainAr => via_ar(&c, rng, opts),
                    _ => via_engine(&c, target, rng, opts),
                }
                .map(|(a, s)| (Draw::Reals(a), s))
            }
            ModelSpec::Wilson { root } => {
                let start = rng.counter();
                if method == Method::PlainAr {
                    let t = WilsonArTarget::new(g, *root)?;
                    let (x, stats) = plain_ar_sample(&t, rng, opts)?;
                    return Ok((Draw::Tree(t.to_tree(&x)), stats));
                }
                let tree = wilson_sample(g, *root, rng)?;
                let stats = SampleStats {
                    attempts: 1,
                    proposals: (g.node_count() as u64).saturating_sub(1),
                    draws: rng.counter() - start,
                    ..SampleStats::default()
                };
                Ok((Draw::Tree(tree), stats))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Generator;

    #[test]
    fn methods_parse() {
        assert_eq!("ar".parse::<Method>().unwrap(), Method::PlainAr);
        assert!("gibbs".parse::<Method>().is_err());
    }

    #[test]
    fn every_model_draws() {
        let g = Graph::generate(Generator::Grid { rows: 2, cols: 3 }).unwrap();
        let specs = [
            "hardcore:lambda=1",
            "strauss:lambda=1,alpha=0.5",
            "rc:p=0.2,q=2",
            "autonormal:J=1,beta=0.5,y=0.3",
            "wilson:root=2",
        ];
        let mut rng = RngStream::new(8);
        for s in specs {
            let spec: ModelSpec = s.parse().unwrap();
            for m in [Method::Prar, Method::PlainAr] {
                let sampler = Sampler::new(spec.clone(), &g, EngineOptions::default(), m).unwrap();
                let (d, stats) = sampler.draw(None, &mut rng).unwrap();
                assert!(stats.attempts >= 1);
                let all = full(sampler.dimension_count());
                match d {
                    Draw::Bits(a) => assert!(a.project(&all).is_some()),
                    Draw::Reals(a) => assert!(a.project(&all).is_some()),
                    Draw::Tree(t) => assert!(crate::wilson::is_rooted_tree(&g, &t)),
                }
            }
        }
        let rc: ModelSpec = "rc:p=0.2,q=2".parse().unwrap();
        assert!(Sampler::new(rc, &g, EngineOptions::default(), Method::Backbone).is_err());
    }
}
