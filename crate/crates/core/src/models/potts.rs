use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::RngStream;

/// Turn a random cluster configuration into a Potts coloring: every open
/// cluster gets one uniform color from `1..=q`. Clusters are colored in
/// order of their smallest node.
pub fn cluster_to_potts(g: &Graph, edge_bits: &[bool], q: f64, rng: &mut RngStream) -> Result<Vec<u32>> {
    if q.fract() != 0.0 || !(2.0..=u32::MAX as f64).contains(&q) {
        return Err(Error::param(format!("Potts q must be an integer >= 2, got {q}")));
    }
    let q = q as usize;
    let labels = g.component_labels(edge_bits)?;
    let mut color = vec![0u32; g.node_count()];
    for v in 0..g.node_count() {
        color[v] = if labels[v] == v {
            rng.index(q) as u32 + 1
        } else {
            color[labels[v]]
        };
    }
    Ok(color)
}
