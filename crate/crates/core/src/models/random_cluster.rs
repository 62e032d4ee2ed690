use std::collections::{HashSet, VecDeque};

use crate::engine::{ArTarget, Lookup, ModelContract, Step, View};
use crate::graph::Graph;
use crate::rng::RngStream;

use super::RandomClusterParams;

/// Random cluster model in its penalty form: relative to the model with the
/// edge removed, an open edge `{i, j}` costs a factor `1/q` when the rest of
/// the configuration leaves `i` and `j` disconnected, and nothing otherwise.
///
/// A closed edge accepts at once. An open edge draws `U`; `U < 1/q` accepts
/// at once. Otherwise the open cluster of `i` (the lower endpoint) is
/// explored breadth-first, edges in id order, resolving unknown edges one at
/// a time, until `j` is reached (accept) or the cluster is exhausted
/// (reject).
#[derive(Clone, Copy, Debug)]
pub struct RandomClusterContract<'g> {
    graph: &'g Graph,
    p: f64,
    inv_q: f64,
}

#[derive(Clone, Debug, Default)]
pub enum RandomClusterCheck {
    #[default]
    Start,
    Search(Box<Search>),
}

#[derive(Clone, Debug)]
pub struct Search {
    target: usize,
    node: usize,
    cursor: usize,
    queue: VecDeque<usize>,
    visited: HashSet<usize>,
}

impl<'g> RandomClusterContract<'g> {
    pub fn new(graph: &'g Graph, params: RandomClusterParams) -> Self {
        Self {
            graph,
            p: params.p(),
            inv_q: 1.0 / params.q(),
        }
    }

    /// Whether the endpoints of `edge` are joined by open edges still in
    /// the model, under a full completion.
    fn connected_without<V: View<bool>>(&self, edge: usize, view: &V, completion: &[bool]) -> bool {
        let (i, j) = self.graph.edge(edge);
        let mut seen = HashSet::from([i]);
        let mut queue = VecDeque::from([i]);
        while let Some(u) = queue.pop_front() {
            for (&w, &f) in self.graph.neighbors(u).iter().zip(self.graph.incident_edges(u)) {
                if f == edge || view.is_removed(f) || !completion[f] {
                    continue;
                }
                if w == j {
                    return true;
                }
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        false
    }
}

impl ModelContract for RandomClusterContract<'_> {
    type Label = bool;
    type Check = RandomClusterCheck;

    fn dimension_count(&self) -> usize {
        self.graph.edge_count()
    }

    fn sample_marginal(&self, _dim: usize, rng: &mut RngStream) -> bool {
        rng.bernoulli_unchecked(self.p)
    }

    fn begin_check(&self, _dim: usize, _label: bool) -> RandomClusterCheck {
        RandomClusterCheck::Start
    }

    fn advance<V: View<bool>>(
        &self,
        dim: usize,
        open: bool,
        check: &mut RandomClusterCheck,
        view: &V,
        rng: &mut RngStream,
    ) -> Step {
        if !open || self.inv_q >= 1.0 {
            return Step::Accept;
        }
        let search = match check {
            RandomClusterCheck::Start => {
                if rng.uniform() < self.inv_q {
                    return Step::Accept;
                }
                let (i, j) = self.graph.edge(dim);
                *check = RandomClusterCheck::Search(Box::new(Search {
                    target: j,
                    node: i,
                    cursor: 0,
                    queue: VecDeque::new(),
                    visited: HashSet::from([i]),
                }));
                match check {
                    RandomClusterCheck::Search(s) => s,
                    RandomClusterCheck::Start => unreachable!(),
                }
            }
            RandomClusterCheck::Search(s) => s,
        };
        loop {
            let nbrs = self.graph.neighbors(search.node);
            let edges = self.graph.incident_edges(search.node);
            while let Some(&f) = edges.get(search.cursor) {
                match view.lookup(f) {
                    Lookup::Removed | Lookup::Known(false) => {}
                    Lookup::Known(true) => {
                        let w = nbrs[search.cursor];
                        if w == search.target {
                            return Step::Accept;
                        }
                        if search.visited.insert(w) {
                            search.queue.push_back(w);
                        }
                    }
                    Lookup::Unknown => return Step::Need(f),
                }
                search.cursor += 1;
            }
            match search.queue.pop_front() {
                Some(next) => {
                    search.node = next;
                    search.cursor = 0;
                }
                None => return Step::Reject,
            }
        }
    }

    fn unconditional_accept_prob<V: View<bool>>(&self, _dim: usize, open: bool, _view: &V) -> f64 {
        if open {
            self.inv_q
        } else {
            1.0
        }
    }

    fn accept_prob<V: View<bool>>(&self, dim: usize, open: bool, view: &V, completion: &[bool]) -> f64 {
        if !open || self.connected_without(dim, view, completion) {
            1.0
        } else {
            self.inv_q
        }
    }

    /// Unknown edges on the boundary of the lower endpoint's open cluster
    /// (as far as it is known).
    fn dependency_frontier<V: View<bool>>(&self, dim: usize, open: bool, view: &V) -> Vec<usize> {
        if !open || self.inv_q >= 1.0 {
            return Vec::new();
        }
        let (i, _) = self.graph.edge(dim);
        let mut seen = HashSet::from([i]);
        let mut queue = VecDeque::from([i]);
        let mut frontier = Vec::new();
        while let Some(u) = queue.pop_front() {
            for (&w, &f) in self.graph.neighbors(u).iter().zip(self.graph.incident_edges(u)) {
                match view.lookup(f) {
                    Lookup::Unknown => frontier.push(f),
                    Lookup::Known(true) if seen.insert(w) => queue.push_back(w),
                    _ => {}
                }
            }
        }
        frontier.sort_unstable();
        frontier.dedup();
        frontier
    }
}

impl ArTarget for RandomClusterContract<'_> {
    type Label = bool;

    fn dimension_count(&self) -> usize {
        self.graph.edge_count()
    }

    fn mu_sample(&self, rng: &mut RngStream) -> Vec<bool> {
        (0..self.graph.edge_count())
            .map(|_| rng.bernoulli_unchecked(self.p))
            .collect()
    }

    /// `(1/q)^{n − c(x)}`.
    fn weight_ratio(&self, x: &[bool]) -> f64 {
        let c = self.graph.count_components(x).expect("configuration sized by mu_sample");
        self.inv_q.powi((self.graph.node_count() - c) as i32)
    }
}
