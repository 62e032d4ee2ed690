use crate::engine::{ArTarget, Lookup, ModelContract, Step, View};
use crate::error::Result;
use crate::graph::Graph;
use crate::rng::RngStream;

use super::AutonormalParams;

pub(super) fn weight(g: &Graph, beta: f64, x: &[f64]) -> f64 {
    let energy: f64 = g.edges().iter().map(|&(i, j)| (x[i] - x[j]).powi(2)).sum();
    (-beta * energy).exp()
}

/// Smallest value the factor `exp(−β(x − x')²)` can take over `x' ∈ [0, 1]`.
fn edge_floor(beta: f64, x: f64) -> f64 {
    let reach = (1.0 - x).max(x);
    (-beta * reach * reach).exp()
}

/// Autonormal model on `[0, 1]^V`.
///
/// Each edge from a node to a neighbor still in the model gets its own
/// uniform `U_w`. If `U_w` falls below the neighbor-independent floor
/// `exp(−β max{1−x, x}²)` the edge accepts without looking at the neighbor;
/// otherwise the neighbor's label is needed and the edge accepts iff
/// `U_w < exp(−β(x − x_w)²)`. The node accepts iff every edge does.
#[derive(Clone, Debug)]
pub struct AutonormalContract<'g> {
    graph: &'g Graph,
    params: AutonormalParams,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AutonormalCheck {
    cursor: usize,
    /// Uniform already drawn for the edge at `cursor`.
    pending_u: Option<f64>,
}

impl<'g> AutonormalContract<'g> {
    /// Fails if `y` is neither one value nor one per node.
    pub fn new(graph: &'g Graph, params: &AutonormalParams) -> Result<Self> {
        Ok(Self {
            graph,
            params: params.fitted_to(graph.node_count())?,
        })
    }

    fn factor(&self, x: f64, xw: f64) -> f64 {
        (-self.params.beta() * (x - xw).powi(2)).exp()
    }
}

impl ModelContract for AutonormalContract<'_> {
    type Label = f64;
    type Check = AutonormalCheck;

    fn dimension_count(&self) -> usize {
        self.graph.node_count()
    }

    fn sample_marginal(&self, dim: usize, rng: &mut RngStream) -> f64 {
        rng.truncated_normal(self.params.y()[dim], self.params.variance())
            .expect("parameters validated on construction")
    }

    fn begin_check(&self, _dim: usize, _label: f64) -> AutonormalCheck {
        AutonormalCheck::default()
    }

    fn advance<V: View<f64>>(
        &self,
        dim: usize,
        x: f64,
        check: &mut AutonormalCheck,
        view: &V,
        rng: &mut RngStream,
    ) -> Step {
        let floor = edge_floor(self.params.beta(), x);
        let nbrs = self.graph.neighbors(dim);
        while let Some(&w) = nbrs.get(check.cursor) {
            if view.is_removed(w) || floor >= 1.0 {
                check.cursor += 1;
                continue;
            }
            let u = *check.pending_u.get_or_insert_with(|| rng.uniform());
            if u < floor {
                check.cursor += 1;
                check.pending_u = None;
                continue;
            }
            match view.lookup(w) {
                Lookup::Known(xw) => {
                    if u < self.factor(x, xw) {
                        check.cursor += 1;
                        check.pending_u = None;
                    } else {
                        return Step::Reject;
                    }
                }
                Lookup::Unknown => return Step::Need(w),
                Lookup::Removed => unreachable!(),
            }
        }
        Step::Accept
    }

    fn unconditional_accept_prob<V: View<f64>>(&self, dim: usize, x: f64, view: &V) -> f64 {
        let exposed = self
            .graph
            .neighbors(dim)
            .iter()
            .filter(|&&w| !view.is_removed(w))
            .count();
        edge_floor(self.params.beta(), x).powi(exposed as i32)
    }

    fn accept_prob<V: View<f64>>(&self, dim: usize, x: f64, view: &V, completion: &[f64]) -> f64 {
        self.graph
            .neighbors(dim)
            .iter()
            .filter(|&&w| !view.is_removed(w))
            .map(|&w| self.factor(x, completion[w]))
            .product()
    }

    fn dependency_frontier<V: View<f64>>(&self, dim: usize, x: f64, view: &V) -> Vec<usize> {
        if edge_floor(self.params.beta(), x) >= 1.0 {
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

impl ArTarget for AutonormalContract<'_> {
    type Label = f64;

    fn dimension_count(&self) -> usize {
        self.graph.node_count()
    }

    fn mu_sample(&self, rng: &mut RngStream) -> Vec<f64> {
        (0..self.graph.node_count())
            .map(|v| self.sample_marginal(v, rng))
            .collect()
    }

    fn weight_ratio(&self, x: &[f64]) -> f64 {
        weight(self.graph, self.params.beta(), x)
    }
}
