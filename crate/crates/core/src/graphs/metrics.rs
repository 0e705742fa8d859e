use super::DirectedGraph;
use crate::error::{Error, Result};

/// Realized density and reciprocity of a directed graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphMetrics {
    pub density: f64,
    pub reciprocity: f64,
}

pub fn graph_metrics(g: &DirectedGraph) -> Result<GraphMetrics> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::Config("metrics need at least 2 nodes".into()));
    }
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::Degenerate("reciprocity is undefined for an empty graph".into()));
    }
    let reciprocated = g
        .edges()
        .filter(|(e, _)| g.has_edge(e.target, e.source))
        .count();
    Ok(GraphMetrics {
        density: m as f64 / (n * (n - 1)) as f64,
        reciprocity: reciprocated as f64 / m as f64,
    })
}

/// Per-node anticlustering `k_i (1 - c_i)` on the undirected projection,
/// where `c_i` is the local clustering coefficient (0 when `k_i < 2`).
#[derive(Clone, Debug, PartialEq)]
pub struct Anticlustering {
    pub per_node: Vec<f64>,
    pub mean: f64,
}

pub fn anticlustering(g: &DirectedGraph) -> Anticlustering {
    let n = g.node_count();
    let neighbors: Vec<_> = (0..n).map(|v| g.undirected_neighbors(v)).collect();
    let per_node: Vec<f64> = (0..n)
        .map(|v| {
            let nb: Vec<usize> = neighbors[v].iter().copied().collect();
            let k = nb.len();
            if k < 2 {
                return k as f64;
            }
            let mut links = 0usize;
            for (a, &u) in nb.iter().enumerate() {
                for &w in &nb[a + 1..] {
                    if neighbors[u].contains(&w) {
                        links += 1;
                    }
                }
            }
            let c = links as f64 / (k * (k - 1) / 2) as f64;
            k as f64 * (1.0 - c)
        })
        .collect();
    let mean = if n == 0 {
        0.0
    } else {
        per_node.iter().sum::<f64>() / n as f64
    };
    Anticlustering { per_node, mean }
}
