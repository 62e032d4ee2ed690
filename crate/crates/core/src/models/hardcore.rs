use crate::engine::{ArTarget, Lookup, ModelContract, Step, View};
use crate::graph::Graph;
use crate::rng::RngStream;

use super::HardcoreParams;

pub(super) fn weight(g: &Graph, x: &[bool]) -> f64 {
    if g.edges().iter().any(|&(i, j)| x[i] && x[j]) {
        0.0
    } else {
        1.0
    }
}

/// Independent sets. A node labeled 0 accepts at once; a node labeled 1
/// accepts iff every neighbor still in the model below it is 0, and the
/// test stops at the first neighbor found to be 1.
#[derive(Clone, Copy, Debug)]
pub struct HardcoreContract<'g> {
    graph: &'g Graph,
    activity: f64,
}

impl<'g> HardcoreContract<'g> {
    pub fn new(graph: &'g Graph, params: HardcoreParams) -> Self {
        Self {
            graph,
            activity: params.activity(),
        }
    }
}

impl ModelContract for HardcoreContract<'_> {
    type Label = bool;
    /// Position in the neighbor list.
    type Check = usize;

    fn dimension_count(&self) -> usize {
        self.graph.node_count()
    }

    fn sample_marginal(&self, _dim: usize, rng: &mut RngStream) -> bool {
        rng.bernoulli_unchecked(self.activity)
    }

    fn begin_check(&self, _dim: usize, _label: bool) -> usize {
        0
    }

    fn advance<V: View<bool>>(
        &self,
        dim: usize,
        label: bool,
        cursor: &mut usize,
        view: &V,
        _rng: &mut RngStream,
    ) -> Step {
        if !label {
            return Step::Accept;
        }
        let nbrs = self.graph.neighbors(dim);
        while let Some(&w) = nbrs.get(*cursor) {
            match view.lookup(w) {
                Lookup::Removed | Lookup::Known(false) => *cursor += 1,
                Lookup::Known(true) => return Step::Reject,
                Lookup::Unknown => return Step::Need(w),
            }
        }
        Step::Accept
    }

    fn unconditional_accept_prob<V: View<bool>>(&self, dim: usize, label: bool, view: &V) -> f64 {
        let exposed = self.graph.neighbors(dim).iter().any(|&w| !view.is_removed(w));
        if label && exposed {
            0.0
        } else {
            1.0
        }
    }

    fn accept_prob<V: View<bool>>(&self, dim: usize, label: bool, view: &V, completion: &[bool]) -> f64 {
        let clash = self
            .graph
            .neighbors(dim)
            .iter()
            .any(|&w| !view.is_removed(w) && completion[w]);
        if label && clash {
            0.0
        } else {
            1.0
        }
    }

    fn dependency_frontier<V: View<bool>>(&self, dim: usize, label: bool, view: &V) -> Vec<usize> {
        if !label {
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

impl ArTarget for HardcoreContract<'_> {
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
        weight(self.graph, x)
    }
}
