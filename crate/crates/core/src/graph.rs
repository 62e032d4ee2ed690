//! Undirected simple graphs shared by every model.
//!
//! Nodes are `0..n` and edges are numbered `0..m` in canonical order: sorted
//! lexicographically by `(i, j)` with `i < j`. Adjacency is stored in CSR form
//! with each node's neighbors sorted ascending, alongside the id of the edge
//! that joins them, so node-indexed and edge-indexed models share one layout.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    incident: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("node_count", &self.node_count)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph from an edge list, canonicalizing endpoint order.
    ///
    /// Out-of-range endpoints, self-loops and repeated pairs (in either
    /// orientation) are rejected.
    pub fn new(node_count: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut edges = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            for node in [a, b] {
                if node >= node_count {
                    return Err(Error::NodeOutOfRange { node, node_count });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_canonical(node_count, edges))
    }

    fn from_canonical(node_count: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut degree = vec![0usize; node_count];
        for &(i, j) in &edges {
            degree[i] += 1;
            degree[j] += 1;
        }
        let mut offsets = Vec::with_capacity(node_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..node_count].to_vec();
        let mut neighbors = vec![0; 2 * edges.len()];
        let mut incident = vec![0; 2 * edges.len()];
        // Iterating edges in canonical order fills each slot in ascending
        // neighbor order: for node v, edges (u, v) with u < v come first
        // sorted by u, then edges (v, w) sorted by w.
        for (id, &(i, j)) in edges.iter().enumerate() {
            neighbors[cursor[i]] = j;
            incident[cursor[i]] = id;
            cursor[i] += 1;
            neighbors[cursor[j]] = i;
            incident[cursor[j]] = id;
            cursor[j] += 1;
        }
        debug_assert!((0..node_count)
            .all(|v| neighbors[offsets[v]..offsets[v + 1]].windows(2).all(|w| w[0] < w[1])));
        Self {
            node_count,
            offsets,
            neighbors,
            incident,
            edges,
        }
    }

    pub fn generate(kind: Generator) -> Result<Self> {
        let mut edges = Vec::new();
        let n = match kind {
            Generator::Grid { rows, cols } => {
                if rows == 0 || cols == 0 {
                    return Err(Error::InvalidGenerator(format!(
                        "grid needs at least one row and column, got {rows}x{cols}"
                    )));
                }
                for r in 0..rows {
                    for c in 0..cols {
                        let v = r * cols + c;
                        if c + 1 < cols {
                            edges.push((v, v + 1));
                        }
                        if r + 1 < rows {
                            edges.push((v, v + cols));
                        }
                    }
                }
                rows * cols
            }
            Generator::Cycle(n) => {
                if n < 3 {
                    return Err(Error::InvalidGenerator(format!(
                        "cycle needs at least 3 nodes, got {n}"
                    )));
                }
                edges.extend((0..n - 1).map(|v| (v, v + 1)));
                edges.push((0, n - 1));
                n
            }
            Generator::Path(n) => {
                if n == 0 {
                    return Err(Error::InvalidGenerator("path needs at least 1 node".into()));
                }
                edges.extend((0..n - 1).map(|v| (v, v + 1)));
                n
            }
            Generator::Complete(n) => {
                if n == 0 {
                    return Err(Error::InvalidGenerator(
                        "complete graph needs at least 1 node".into(),
                    ));
                }
                for i in 0..n {
                    edges.extend((i + 1..n).map(|j| (i, j)));
                }
                n
            }
        };
        edges.sort_unstable();
        Ok(Self::from_canonical(n, edges))
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list; position is the edge id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Edge ids incident to `v`, aligned with [`Graph::neighbors`].
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Id of the edge `{a, b}`, if present.
    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        if a >= self.node_count || b >= self.node_count {
            return None;
        }
        let nbrs = self.neighbors(a);
        nbrs.binary_search(&b)
            .ok()
            .map(|k| self.incident_edges(a)[k])
    }

    /// Number of connected components of `(V, {e : edge_bits[e]})`.
    /// Isolated nodes count as components.
    pub fn count_components(&self, edge_bits: &[bool]) -> Result<usize> {
        if edge_bits.len() != self.edge_count() {
            return Err(Error::LengthMismatch {
                expected: self.edge_count(),
                actual: edge_bits.len(),
            });
        }
        let mut sets = DisjointSets::new(self.node_count);
        let mut components = self.node_count;
        for (&(i, j), _) in self.edges.iter().zip(edge_bits).filter(|(_, &b)| b) {
            if sets.union(i, j) {
                components -= 1;
            }
        }
        Ok(components)
    }

    /// Component label (the smallest node id in the component) for every node,
    /// using only edges whose bit is set.
    pub fn component_labels(&self, edge_bits: &[bool]) -> Result<Vec<usize>> {
        if edge_bits.len() != self.edge_count() {
            return Err(Error::LengthMismatch {
                expected: self.edge_count(),
                actual: edge_bits.len(),
            });
        }
        let mut sets = DisjointSets::new(self.node_count);
        for (&(i, j), _) in self.edges.iter().zip(edge_bits).filter(|(_, &b)| b) {
            sets.union(i, j);
        }
        let mut smallest = vec![usize::MAX; self.node_count];
        let roots: Vec<usize> = (0..self.node_count).map(|v| sets.find(v)).collect();
        for (v, &r) in roots.iter().enumerate() {
            smallest[r] = smallest[r].min(v);
        }
        Ok(roots.into_iter().map(|r| smallest[r]).collect())
    }

    pub fn is_connected(&self) -> bool {
        self.node_count == 0
            || self
                .count_components(&vec![true; self.edge_count()])
                .is_ok_and(|c| c == 1)
    }

    /// Parses the edge-list text format: a header line `n m`, then `m`
    /// lines `i j`. Blank lines and lines starting with `#` are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (lineno, header) = lines
            .next()
            .ok_or_else(|| Error::Parse("missing 'n m' header".into()))?;
        let (n, m) = parse_pair(header, lineno)?;
        let mut pairs = Vec::with_capacity(m);
        for (lineno, line) in lines {
            pairs.push(parse_pair(line, lineno)?);
        }
        if pairs.len() != m {
            return Err(Error::Parse(format!(
                "header declares {m} edges but {} were listed",
                pairs.len()
            )));
        }
        Self::new(n, &pairs)
    }

    pub fn read_edge_list(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_edge_list(&text)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.node_count, self.edge_count());
        for &(i, j) in &self.edges {
            out.push_str(&format!("{i} {j}\n"));
        }
        out
    }
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(|t| {
        t.parse::<usize>()
            .map_err(|e| Error::Parse(format!("line {lineno}: '{t}': {e}")))
    });
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok((a?, b?)),
        _ => Err(Error::Parse(format!(
            "line {lineno}: expected two integers, got '{line}'"
        ))),
    }
}

/// Named graph families. Grids are numbered row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Grid { rows: usize, cols: usize },
    Cycle(usize),
    Path(usize),
    Complete(usize),
}

impl Generator {
    /// The same family resized to roughly `n` nodes (square grids use the
    /// nearest side length).
    pub fn with_size(self, n: usize) -> Self {
        match self {
            Generator::Grid { .. } => {
                let side = ((n as f64).sqrt().round() as usize).max(1);
                Generator::Grid {
                    rows: side,
                    cols: side,
                }
            }
            Generator::Cycle(_) => Generator::Cycle(n),
            Generator::Path(_) => Generator::Path(n),
            Generator::Complete(_) => Generator::Complete(n),
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("graph spec '{s}' has no ':'")))?;
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("graph spec '{s}': {e}")))
        };
        Ok(match kind {
            "grid" => {
                let (r, c) = arg
                    .split_once(['x', 'X'])
                    .ok_or_else(|| Error::Parse(format!("grid spec '{s}' must be grid:RxC")))?;
                Generator::Grid {
                    rows: num(r)?,
                    cols: num(c)?,
                }
            }
            "cycle" => Generator::Cycle(num(arg)?),
            "path" => Generator::Path(num(arg)?),
            "complete" => Generator::Complete(num(arg)?),
            other => return Err(Error::Parse(format!("unknown graph family '{other}'"))),
        })
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Grid { rows, cols } => write!(f, "grid:{rows}x{cols}"),
            Generator::Cycle(n) => write!(f, "cycle:{n}"),
            Generator::Path(n) => write!(f, "path:{n}"),
            Generator::Complete(n) => write!(f, "complete:{n}"),
        }
    }
}

/// Union-find with path halving and union by size; no recursion.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns false if they were already one.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.neighbors(0), &[1]);
        assert_eq!(g.neighbors(1), &[0]);
    }

    #[test]
    fn edgeless() {
        let g = Graph::new(3, &[]).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.max_degree(), 0);
        assert_eq!(g.count_components(&[]).unwrap(), 3);
    }

    #[test]
    fn triangle() {
        let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!((0..3).all(|v| g.degree(v) == 2));
        assert_eq!(g.max_degree(), 2);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(g.count_components(&[true; 3]).unwrap(), 1);
    }

    #[test]
    fn build_errors_are_distinct() {
        assert!(matches!(
            Graph::new(2, &[(0, 2)]),
            Err(Error::NodeOutOfRange { node: 2, node_count: 2 })
        ));
        assert!(matches!(Graph::new(2, &[(1, 1)]), Err(Error::SelfLoop(1))));
        assert!(matches!(
            Graph::new(3, &[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        ));
    }

    #[test]
    fn generators() {
        let g = Graph::generate(Generator::Grid { rows: 2, cols: 2 }).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (4, 4));

        let g = Graph::generate(Generator::Grid { rows: 3, cols: 3 }).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (9, 3 * 2 + 3 * 2));
        assert_eq!(g.max_degree(), 4);
        assert_eq!(g.neighbors(4), &[1, 3, 5, 7]);

        assert_eq!(
            Graph::generate(Generator::Path(2)).unwrap(),
            Graph::new(2, &[(0, 1)]).unwrap()
        );
        assert_eq!(Graph::generate(Generator::Path(5)).unwrap().max_degree(), 2);
        assert!(Graph::generate(Generator::Cycle(2)).is_err());
        assert_eq!(Graph::generate(Generator::Complete(5)).unwrap().edge_count(), 10);
    }

    #[test]
    fn grid_edge_count_formula() {
        for r in 1..6 {
            for c in 1..6 {
                let g = Graph::generate(Generator::Grid { rows: r, cols: c }).unwrap();
                assert_eq!(g.edge_count(), r * (c - 1) + c * (r - 1));
            }
        }
    }

    #[test]
    fn incident_edges_align_with_neighbors() {
        let g = Graph::generate(Generator::Grid { rows: 3, cols: 4 }).unwrap();
        for v in 0..g.node_count() {
            for (&w, &e) in g.neighbors(v).iter().zip(g.incident_edges(v)) {
                let (a, b) = g.edge(e);
                assert_eq!((a, b), (v.min(w), v.max(w)));
                assert_eq!(g.edge_id(v, w), Some(e));
            }
        }
    }

    #[test]
    fn one_edge_on_two_by_two_lattice_leaves_three_components() {
        let g = Graph::generate(Generator::Grid { rows: 2, cols: 2 }).unwrap();
        let mut bits = vec![false; 4];
        bits[0] = true;
        assert_eq!(g.count_components(&bits).unwrap(), 3);
        assert!(matches!(
            g.count_components(&[true]),
            Err(Error::LengthMismatch { expected: 4, actual: 1 })
        ));
    }

    #[test]
    fn edge_list_roundtrip_and_comments() {
        let text = "# a triangle\n3 3\n0 1\n# middle\n2 1\n0 2\n";
        let g = Graph::parse_edge_list(text).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        assert!(Graph::parse_edge_list("3 2\n0 1\n").is_err());
        assert!(Graph::parse_edge_list("2 1\n0 x\n").is_err());
    }

    #[test]
    fn generator_spec_grammar() {
        assert_eq!(
            "grid:3x4".parse::<Generator>().unwrap(),
            Generator::Grid { rows: 3, cols: 4 }
        );
        assert_eq!("cycle:10".parse::<Generator>().unwrap(), Generator::Cycle(10));
        assert!("torus:3".parse::<Generator>().is_err());
        assert_eq!(Generator::Cycle(5).to_string(), "cycle:5");
    }

    #[test]
    fn component_labels_use_smallest_member() {
        let g = Graph::generate(Generator::Path(4)).unwrap();
        assert_eq!(
            g.component_labels(&[false, true, false]).unwrap(),
            vec![0, 1, 1, 3]
        );
    }
}
