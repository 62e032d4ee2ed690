use crate::engine::{ArTarget, Lookup, ModelContract, Step, View};
use crate::graph::Graph;
use crate::rng::RngStream;

use super::StraussParams;

pub(super) fn weight(g: &Graph, alpha: f64, x: &[bool]) -> f64 {
    let clashes = g.edges().iter().filter(|&&(i, j)| x[i] && x[j]).count();
    alpha.powi(clashes as i32)
}

/// Strauss process. For a node labeled 1 each edge to a neighbor still in
/// the model draws a Bern(α) coin: heads means the edge accepts whatever the
/// neighbor is; tails means the edge accepts iff the neighbor is 0. A
/// neighbor already known to be 0 needs no coin.
#[derive(Clone, Copy, Debug)]
pub struct StraussContract<'g> {
    graph: &'g Graph,
    activity: f64,
    alpha: f64,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct StraussCheck {
    cursor: usize,
    /// Tails was drawn for the neighbor at `cursor`.
    coin_tails: bool,
}

impl<'g> StraussContract<'g> {
    pub fn new(graph: &'g Graph, params: StraussParams) -> Self {
        Self {
            graph,
            activity: params.activity(),
            alpha: params.alpha(),
        }
    }
}

impl ModelContract for StraussContract<'_> {
    type Label = bool;
    type Check = StraussCheck;

    fn dimension_count(&self) -> usize {
        self.graph.node_count()
    }

    fn sample_marginal(&self, _dim: usize, rng: &mut RngStream) -> bool {
        rng.bernoulli_unchecked(self.activity)
    }

    fn begin_check(&self, _dim: usize, _label: bool) -> StraussCheck {
        StraussCheck::default()
    }

    fn advance<V: View<bool>>(
        &self,
        dim: usize,
        label: bool,
        check: &mut StraussCheck,
        view: &V,
        rng: &mut RngStream,
    ) -> Step {
        if !label {
            return Step::Accept;
        }
        let nbrs = self.graph.neighbors(dim);
        while let Some(&w) = nbrs.get(check.cursor) {
            let seen = view.lookup(w);
            if matches!(seen, Lookup::Removed | Lookup::Known(false)) {
                check.cursor += 1;
                check.coin_tails = false;
                continue;
            }
            if !check.coin_tails {
                if rng.bernoulli_unchecked(self.alpha) {
                    check.cursor += 1;
                    continue;
                }
                check.coin_tails = true;
            }
            match seen {
                Lookup::Known(true) => return Step::Reject,
                Lookup::Unknown => return Step::Need(w),
                Lookup::Removed | Lookup::Known(false) => unreachable!(),
            }
        }
        Step::Accept
    }

    fn unconditional_accept_prob<V: View<bool>>(&self, dim: usize, label: bool, view: &V) -> f64 {
        if !label {
            return 1.0;
        }
        let exposed = self
            .graph
            .neighbors(dim)
            .iter()
            .filter(|&&w| !view.is_removed(w))
            .count();
        self.alpha.powi(exposed as i32)
    }

    fn accept_prob<V: View<bool>>(&self, dim: usize, label: bool, view: &V, completion: &[bool]) -> f64 {
        if !label {
            return 1.0;
        }
        let clashes = self
            .graph
            .neighbors(dim)
            .iter()
            .filter(|&&w| !view.is_removed(w) && completion[w])
            .count();
        self.alpha.powi(clashes as i32)
    }

    fn dependency_frontier<V: View<bool>>(&self, dim: usize, label: bool, view: &V) -> Vec<usize> {
        if !label || self.alpha >= 1.0 {
            return Vec::new();
        }
        self.graph
            .neighbors(dim)
            .iter()
            .copied()
            .filter(|&w| view.lookup(w) == Lookup::Unknown)
            .collect()
    }
}

impl ArTarget for StraussContract<'_> {
    type Label = bool;

    fn dimension_count(&self) -> usize {
        self.graph.node_count()
    }

    fn mu_sample(&self, rng: &mut RngStream) -> Vec<bool> {
        (0..self.graph.node_count())
            .map(|_| rng.bernoulli_unchecked(self.activity))
            .collect()
    }

    fn weight_ratio(&self, x: &[bool]) -> f64 {
        weight(self.graph, self.alpha, x)
    }
}
