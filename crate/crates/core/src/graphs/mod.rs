//! Ground-truth directed networks: representation, random generators with
//! controlled density and reciprocity, lag assignment, normalization, and
//! structural metrics.

mod generate;
mod io;
mod metrics;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

pub use generate::{
    assign_lags, gen_backbone, gen_gnm, gen_shooting_star, generate_graph, MAX_RESAMPLE_ATTEMPTS,
};
pub use io::{parse_edge_list, write_edge_list};
pub use metrics::{anticlustering, graph_metrics, Anticlustering, GraphMetrics};

use crate::error::{Error, Result};
use crate::numerics::{spectral_radius, DenseMatrix};

/// A directed edge `source -> target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
}

impl Edge {
    pub fn new(source: usize, target: usize) -> Self {
        Edge { source, target }
    }

    pub fn reversed(self) -> Self {
        Edge::new(self.target, self.source)
    }
}

/// Directed graph without self-loops; every edge carries a transmission lag.
///
/// The adjacency convention is `A[(target, source)] = 1`, so row `i` collects
/// the inputs of node `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    edges: BTreeMap<Edge, u32>,
}

impl DirectedGraph {
    pub fn new(n: usize) -> Self {
        DirectedGraph {
            n,
            edges: BTreeMap::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Inserts (or re-lags) the edge `source -> target`.
    pub fn add_edge(&mut self, source: usize, target: usize, lag: u32) -> Result<()> {
        if source == target {
            return Err(Error::Config(format!("self-loop on node {source}")));
        }
        if source >= self.n || target >= self.n {
            return Err(Error::Config(format!(
                "edge {source} -> {target} out of range for {} nodes",
                self.n
            )));
        }
        self.edges.insert(Edge::new(source, target), lag);
        Ok(())
    }

    pub fn remove_edge(&mut self, source: usize, target: usize) -> bool {
        self.edges.remove(&Edge::new(source, target)).is_some()
    }

    pub fn has_edge(&self, source: usize, target: usize) -> bool {
        self.edges.contains_key(&Edge::new(source, target))
    }

    pub fn lag(&self, source: usize, target: usize) -> Option<u32> {
        self.edges.get(&Edge::new(source, target)).copied()
    }

    /// Edges in ascending `(source, target)` order with their lags.
    pub fn edges(&self) -> impl Iterator<Item = (Edge, u32)> + '_ {
        self.edges.iter().map(|(e, l)| (*e, *l))
    }

    pub fn max_lag(&self) -> u32 {
        self.edges.values().copied().max().unwrap_or(0)
    }

    pub(crate) fn set_lag(&mut self, edge: Edge, lag: u32) {
        if let Some(slot) = self.edges.get_mut(&edge) {
            *slot = lag;
        }
    }

    /// Unweighted adjacency matrix, `A[(target, source)] = 1`.
    pub fn adjacency(&self) -> DenseMatrix {
        let mut a = DenseMatrix::zeros(self.n, self.n);
        for e in self.edges.keys() {
            a[(e.target, e.source)] = 1.0;
        }
        a
    }

    /// Distinct neighbours of `node` ignoring direction.
    pub fn undirected_neighbors(&self, node: usize) -> BTreeSet<usize> {
        self.edges
            .keys()
            .filter_map(|e| {
                if e.source == node {
                    Some(e.target)
                } else if e.target == node {
                    Some(e.source)
                } else {
                    None
                }
            })
            .collect()
    }
}

/// True iff the adjacency matrix is nilpotent, i.e. the graph has no
/// directed cycle. Computed by boolean repeated squaring up to the `n`-th
/// power.
pub fn is_nilpotent(g: &DirectedGraph) -> bool {
    let n = g.node_count();
    if n == 0 || g.edge_count() == 0 {
        return true;
    }
    let mut power = vec![vec![false; n]; n];
    for (e, _) in g.edges() {
        power[e.target][e.source] = true;
    }
    let mut exponent = 1usize;
    while exponent < n {
        power = bool_square(&power);
        exponent *= 2;
    }
    power.iter().all(|row| row.iter().all(|&b| !b))
}

fn bool_square(m: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = m.len();
    let mut out = vec![vec![false; n]; n];
    for i in 0..n {
        for k in 0..n {
            if m[i][k] {
                for j in 0..n {
                    out[i][j] |= m[k][j];
                }
            }
        }
    }
    out
}

/// Adjacency scaled to unit spectral radius, split by edge lag.
#[derive(Clone, Debug)]
pub struct NormalizedAdjacency {
    /// `A / rho`.
    pub total: DenseMatrix,
    /// `per_lag[k]` holds the edges with lag `k` (the matrix `A^(k+1)`).
    pub per_lag: Vec<DenseMatrix>,
    /// Spectral radius of the unweighted adjacency.
    pub spectral_radius: f64,
}

impl NormalizedAdjacency {
    pub fn node_count(&self) -> usize {
        self.total.rows()
    }

    pub fn max_lag(&self) -> usize {
        self.per_lag.len() - 1
    }
}

/// Scales the adjacency so its largest eigenvalue modulus is 1.
///
/// Nilpotent adjacencies cannot be normalized and yield [`Error::Nilpotent`];
/// generators resample on that signal.
pub fn normalize_adjacency(g: &DirectedGraph) -> Result<NormalizedAdjacency> {
    if is_nilpotent(g) {
        return Err(Error::Nilpotent);
    }
    let a = g.adjacency();
    let rho = spectral_radius(&a);
    if rho <= 0.0 || !rho.is_finite() {
        return Err(Error::Numerical(format!("bad spectral radius {rho}")));
    }
    let n = g.node_count();
    let lags = g.max_lag() as usize;
    let mut per_lag = vec![DenseMatrix::zeros(n, n); lags + 1];
    for (e, lag) in g.edges() {
        per_lag[lag as usize][(e.target, e.source)] = 1.0 / rho;
    }
    Ok(NormalizedAdjacency {
        total: a.scale(1.0 / rho),
        per_lag,
        spectral_radius: rho,
    })
}

/// Random-graph family used to draw ground-truth networks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphModel {
    /// Directed G(n, m) with a prescribed number of reciprocal pairs.
    Gnm,
    /// Uniform undirected backbone (Erdos-Renyi G(n, P)) oriented to the
    /// target reciprocity.
    Er,
    /// Barabasi-Albert preferential-attachment backbone.
    Ba,
    /// Regular ring lattice backbone.
    Rr,
    /// Watts-Strogatz: ring lattice with random rewiring.
    Sw,
    /// Path joined to a star; fully bidirectional.
    ShootingStar,
}

impl GraphModel {
    pub fn name(self) -> &'static str {
        match self {
            GraphModel::Gnm => "gnm",
            GraphModel::Er => "er",
            GraphModel::Ba => "ba",
            GraphModel::Rr => "rr",
            GraphModel::Sw => "sw",
            GraphModel::ShootingStar => "star",
        }
    }
}

impl fmt::Display for GraphModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gnm" => Ok(GraphModel::Gnm),
            "er" => Ok(GraphModel::Er),
            "ba" => Ok(GraphModel::Ba),
            "rr" => Ok(GraphModel::Rr),
            "sw" => Ok(GraphModel::Sw),
            "star" | "shooting-star" | "shooting_star" => Ok(GraphModel::ShootingStar),
            other => Err(Error::Config(format!("unknown graph model '{other}'"))),
        }
    }
}

pub const DEFAULT_REWIRING: f64 = 0.1;

/// Parameters for drawing a ground-truth network.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphConfig {
    pub model: GraphModel,
    pub n: usize,
    /// Edge density `m / (n (n - 1))`.
    pub density: f64,
    /// Fraction of edges whose reverse edge also exists.
    pub reciprocity: f64,
    /// Largest transmission lag assigned to an edge.
    pub max_lag: u32,
    /// Watts-Strogatz rewiring probability.
    pub rewiring: f64,
    /// Hub degree `K` for shooting-star networks.
    pub hub_degree: usize,
}

impl Default for GraphConfig {
    fn default() -> Self {
        GraphConfig {
            model: GraphModel::Gnm,
            n: 10,
            density: 0.5,
            reciprocity: 0.5,
            max_lag: 0,
            rewiring: DEFAULT_REWIRING,
            hub_degree: 5,
        }
    }
}

impl GraphConfig {
    /// Number of ordered node pairs.
    pub fn ordered_pairs(&self) -> usize {
        self.n * self.n.saturating_sub(1)
    }

    /// Target edge count `m = round(d_e n (n - 1))`.
    pub fn edge_count(&self) -> usize {
        if self.model == GraphModel::ShootingStar {
            return 2 * self.n.saturating_sub(1);
        }
        (self.density * self.ordered_pairs() as f64).round() as usize
    }

    /// Number of reciprocal pairs `p = round(r_e m / 2)`, capped at `m / 2`.
    pub fn reciprocal_pairs(&self) -> usize {
        let m = self.edge_count();
        let p = (self.reciprocity * m as f64 / 2.0).round() as usize;
        p.min(m / 2)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!("need at least 2 nodes, got {}", self.n)));
        }
        if self.model == GraphModel::ShootingStar {
            if self.hub_degree < 2 || self.hub_degree > self.n - 1 {
                return Err(Error::Config(format!(
                    "shooting-star hub degree must lie in 2..={}, got {}",
                    self.n - 1,
                    self.hub_degree
                )));
            }
            return Ok(());
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::Config(format!("density must lie in (0, 1], got {}", self.density)));
        }
        if !(0.0..=1.0).contains(&self.reciprocity) {
            return Err(Error::Config(format!(
                "reciprocity must lie in [0, 1], got {}",
                self.reciprocity
            )));
        }
        if !(0.0..=1.0).contains(&self.rewiring) {
            return Err(Error::Config(format!(
                "rewiring probability must lie in [0, 1], got {}",
                self.rewiring
            )));
        }
        if self.edge_count() == 0 {
            return Err(Error::Config(format!(
                "density {} gives zero edges on {} nodes",
                self.density, self.n
            )));
        }
        Ok(())
    }
}
