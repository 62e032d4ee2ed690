//! Uniform rooted spanning trees by cycle popping.
//!
//! Each non-root node draws an outgoing arc to a uniform neighbor; the
//! configuration is accepted iff the arcs form a tree directed toward the
//! root. Resolving the arcs lazily by walking from a node until the walk hits
//! the tree, and erasing every loop the walk closes, is exactly the
//! recursive acceptance scheme applied to this density: a loop is a rejected
//! sub-configuration whose labels are redrawn.

use std::fmt;
use std::fmt::Write as _;

use crate::engine::ArTarget;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::RngStream;

/// A spanning tree with every arc pointing toward `root`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootedTree {
    root: usize,
    parent: Vec<Option<usize>>,
}

impl RootedTree {
    /// No validation beyond shape; see [`is_rooted_tree`].
    pub fn new(root: usize, parent: Vec<Option<usize>>) -> Self {
        Self { root, parent }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent.get(v).copied().flatten()
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    /// `root R` followed by one `child parent` line per non-root node,
    /// ascending by child.
    pub fn to_text(&self) -> String {
        let mut out = format!("root {}\n", self.root);
        for (child, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                let _ = writeln!(out, "{child} {p}");
            }
        }
        out
    }

    /// Inverse of [`RootedTree::to_text`] for a tree on `n` nodes.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let head = lines.next().ok_or_else(|| Error::Parse("empty tree block".into()))?;
        let root = head
            .strip_prefix("root ")
            .and_then(|r| r.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::Parse(format!("expected 'root R', got '{head}'")))?;
        let mut parent = vec![None; n];
        for line in lines {
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(c)), Some(Ok(p)), None) if c < n => parent[c] = Some(p),
                _ => return Err(Error::Parse(format!("bad tree line '{line}'"))),
            }
        }
        Ok(Self { root, parent })
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// True iff every non-root node has a parent along a graph edge, the root
/// has none, and following parents from any node reaches the root.
pub fn is_rooted_tree(g: &Graph, t: &RootedTree) -> bool {
    let n = g.node_count();
    if t.parent.len() != n || t.root >= n || t.parent[t.root].is_some() {
        return false;
    }
    for (v, p) in t.parent.iter().enumerate() {
        match p {
            Some(p) if v != t.root && *p < n && g.edge_id(v, *p).is_some() => {}
            None if v == t.root => {}
            _ => return false,
        }
    }
    // 0 = unseen, 1 = on the current chain, 2 = reaches the root.
    let mut state = vec![0u8; n];
    state[t.root] = 2;
    let mut chain = Vec::new();
    for start in 0..n {
        let mut v = start;
        while state[v] == 0 {
            state[v] = 1;
            chain.push(v);
            v = t.parent[v].expect("non-root nodes checked above");
        }
        if state[v] == 1 {
            return false;
        }
        for u in chain.drain(..) {
            state[u] = 2;
        }
    }
    true
}

/// Draw a uniform spanning tree of `g` directed toward `root`.
///
/// Walks start from the unvisited nodes in ascending id order and stop on
/// reaching the tree built so far; each loop the walk closes is erased as
/// soon as it appears.
pub fn wilson_sample(g: &Graph, root: usize, rng: &mut RngStream) -> Result<RootedTree> {
    let n = g.node_count();
    if root >= n {
        return Err(Error::NodeOutOfRange { node: root, node_count: n });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut parent = vec![None; n];
    let mut in_tree = vec![false; n];
    in_tree[root] = true;
    // Position of each node on the current walk, if it is on it.
    let mut on_path: Vec<Option<usize>> = vec![None; n];
    let mut path: Vec<usize> = Vec::new();

    for start in 0..n {
        if in_tree[start] {
            continue;
        }
        path.push(start);
        on_path[start] = Some(0);
        loop {
            let here = *path.last().expect("walk is never empty");
            let nbrs = g.neighbors(here);
            let next = nbrs[rng.index(nbrs.len())];
            if in_tree[next] {
                path.push(next);
                break;
            }
            match on_path[next] {
                Some(pos) => {
                    // Erase the loop next -> ... -> here -> next.
                    for v in path.drain(pos + 1..) {
                        on_path[v] = None;
                    }
                }
                None => {
                    on_path[next] = Some(path.len());
                    path.push(next);
                }
            }
        }
        for w in path.windows(2) {
            parent[w[0]] = Some(w[1]);
            in_tree[w[0]] = true;
            on_path[w[0]] = None;
        }
        path.clear();
    }
    Ok(RootedTree { root, parent })
}

/// Base measure of the tree density: every non-root node picks a uniform
/// neighbor. Accepting iff the picks form a rooted tree gives the uniform
/// tree, which plain acceptance rejection can then sample on small graphs.
pub struct WilsonArTarget<'g> {
    graph: &'g Graph,
    root: usize,
}

impl<'g> WilsonArTarget<'g> {
    pub fn new(graph: &'g Graph, root: usize) -> Result<Self> {
        if root >= graph.node_count() {
            return Err(Error::NodeOutOfRange { node: root, node_count: graph.node_count() });
        }
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(Self { graph, root })
    }

    /// Interpret a configuration (root's entry ignored) as a tree.
    pub fn to_tree(&self, config: &[usize]) -> RootedTree {
        let parent = config
            .iter()
            .enumerate()
            .map(|(v, &p)| (v != self.root).then_some(p))
            .collect();
        RootedTree { root: self.root, parent }
    }
}

impl ArTarget for WilsonArTarget<'_> {
    type Label = usize;

    fn dimension_count(&self) -> usize {
        self.graph.node_count()
    }

    fn mu_sample(&self, rng: &mut RngStream) -> Vec<usize> {
        (0..self.graph.node_count())
            .map(|v| {
                if v == self.root {
                    v
                } else {
                    let nbrs = self.graph.neighbors(v);
                    nbrs[rng.index(nbrs.len())]
                }
            })
            .collect()
    }

    fn weight_ratio(&self, config: &[usize]) -> f64 {
        if is_rooted_tree(self.graph, &self.to_tree(config)) {
            1.0
        } else {
            0.0
        }
    }
}
