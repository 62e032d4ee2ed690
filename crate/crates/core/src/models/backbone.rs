//! Two-color specialization of the recursion for hard-core and Strauss.
//!
//! Only nodes labeled 1 can fail their test, so the pending levels are
//! exactly a chain of 1-labeled nodes, each adjacent to the next: the
//! backbone. The tip scans its neighbors. A neighbor labeled 0 (or, for
//! Strauss, an edge whose Bern(α) coin came up heads) is passed over; a
//! fresh neighbor labeled 1 extends the backbone; a neighbor already
//! accepted with label 1 rejects the tip. A tip that runs out of neighbors
//! is accepted and removed, and the node below it then sees a 1 and is
//! rejected.
//!
//! The randomness is consumed in the same order as the generic engine
//! running the matching contract, so for a fixed seed the two give the same
//! output. It exists as a lean, allocation-light hot path and as an
//! independent cross-check of the engine.

use crate::engine::{EngineOptions, PartialAssignment, SampleStats};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{DrawCounter, RngStream};

use super::ModelSpec;

const UNRESOLVED: u32 = u32::MAX;

struct Tip {
    level: usize,
    cursor: usize,
    coin_tails: bool,
    top: bool,
}

/// Reusable backbone sampler for one hard-core or Strauss model on a graph.
pub struct BackboneSampler<'g> {
    graph: &'g Graph,
    activity: f64,
    /// Bern(α) edge thinning; `None` for hard-core.
    alpha: Option<f64>,
    options: EngineOptions,
    depth_of: Vec<u32>,
    chain: Vec<(usize, bool)>,
    backbone: Vec<Tip>,
}

impl<'g> BackboneSampler<'g> {
    pub fn new(model: &ModelSpec, graph: &'g Graph, options: EngineOptions) -> Result<Self> {
        let (activity, alpha) = match model {
            ModelSpec::Hardcore(p) => (p.activity(), None),
            ModelSpec::Strauss(p) => (p.activity(), Some(p.alpha())),
            other => {
                return Err(Error::param(format!(
                    "the backbone sampler handles hardcore and strauss, not {}",
                    other.name()
                )))
            }
        };
        Ok(Self {
            graph,
            activity,
            alpha,
            options,
            depth_of: vec![UNRESOLVED; graph.node_count()],
            chain: Vec::new(),
            backbone: Vec::new(),
        })
    }

    pub fn sample(
        &mut self,
        target: &[usize],
        rng: &mut RngStream,
    ) -> Result<(PartialAssignment<bool>, SampleStats)> {
        let n = self.graph.node_count();
        if let Some(&bad) = target.iter().find(|&&v| v >= n) {
            return Err(Error::NodeOutOfRange { node: bad, node_count: n });
        }
        let mut order = target.to_vec();
        order.sort_unstable();
        order.dedup();

        let start = rng.counter();
        let mut stats = SampleStats {
            attempts: 1,
            ..SampleStats::default()
        };
        let outcome = order
            .iter()
            .try_for_each(|&v| self.resolve(v, rng, start, &mut stats));
        stats.draws = rng.counter() - start;

        let result = outcome.map(|()| {
            let mut assignment = PartialAssignment::new(n);
            for &(v, label) in &self.chain {
                assignment.insert(v, label);
            }
            assignment
        });
        for &(v, _) in &self.chain {
            self.depth_of[v] = UNRESOLVED;
        }
        self.chain.clear();
        self.backbone.clear();
        result.map(|a| (a, stats))
    }

    /// Draw a label for `v` at the end of the chain; a 1 joins the backbone.
    fn open(&mut self, v: usize, top: bool, rng: &mut RngStream, stats: &mut SampleStats) {
        let label = rng.bernoulli_unchecked(self.activity);
        stats.proposals += 1;
        let level = self.chain.len();
        self.depth_of[v] = level as u32;
        self.chain.push((v, label));
        stats.recursion_depth_max = stats.recursion_depth_max.max(self.backbone.len() + 1);
        if label {
            self.backbone.push(Tip {
                level,
                cursor: 0,
                coin_tails: false,
                top,
            });
        }
    }

    fn resolve(
        &mut self,
        v: usize,
        rng: &mut RngStream,
        start: DrawCounter,
        stats: &mut SampleStats,
    ) -> Result<()> {
        if self.depth_of[v] != UNRESOLVED {
            return Ok(());
        }
        self.open(v, true, rng, stats);

        while let Some(tip) = self.backbone.last_mut() {
            let used = rng.counter() - start;
            if used.total() > self.options.budget {
                return Err(Error::BudgetExceeded {
                    budget: self.options.budget,
                    draws: used,
                    attempts: stats.attempts,
                });
            }
            let level = tip.level;
            let node = self.chain[level].0;
            let nbrs = self.graph.neighbors(node);

            // Scan until the tip needs a fresh neighbor, clashes, or is done.
            let mut fresh = None;
            let mut clash = false;
            while let Some(&w) = nbrs.get(tip.cursor) {
                let depth = self.depth_of[w];
                let removed = depth != UNRESOLVED && depth as usize <= level;
                if removed || (depth != UNRESOLVED && !self.chain[depth as usize].1) {
                    tip.cursor += 1;
                    tip.coin_tails = false;
                    continue;
                }
                if let Some(alpha) = self.alpha {
                    if !tip.coin_tails {
                        if rng.bernoulli_unchecked(alpha) {
                            tip.cursor += 1;
                            continue;
                        }
                        tip.coin_tails = true;
                    }
                }
                if depth == UNRESOLVED {
                    fresh = Some(w);
                } else {
                    clash = true;
                }
                break;
            }

            if let Some(w) = fresh {
                self.open(w, false, rng, stats);
            } else if clash && !self.options.ignore_rejections {
                stats.rejections += 1;
                if tip.top {
                    stats.attempts += 1;
                }
                for &(d, _) in &self.chain[level + 1..] {
                    self.depth_of[d] = UNRESOLVED;
                }
                self.chain.truncate(level + 1);
                let label = rng.bernoulli_unchecked(self.activity);
                stats.proposals += 1;
                self.chain[level].1 = label;
                if label {
                    tip.cursor = 0;
                    tip.coin_tails = false;
                } else {
                    self.backbone.pop();
                }
            } else {
                self.backbone.pop();
            }
        }
        Ok(())
    }
}

/// One backbone draw of the labels on `target` (node ids).
pub fn backbone_sample_two_color(
    model: &ModelSpec,
    graph: &Graph,
    target: &[usize],
    rng: &mut RngStream,
    options: EngineOptions,
) -> Result<(PartialAssignment<bool>, SampleStats)> {
    BackboneSampler::new(model, graph, options)?.sample(target, rng)
}
