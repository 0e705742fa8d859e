use std::collections::BTreeSet;

use rand::seq::{index, SliceRandom};
use rand::Rng;

use super::{is_nilpotent, DirectedGraph, GraphConfig, GraphModel};
use crate::error::{Error, Result};

/// Draws are repeated at most this many times when the result is nilpotent.
pub const MAX_RESAMPLE_ATTEMPTS: usize = 1000;

/// Draws a graph for `config`, resampling nilpotent draws, then assigns lags
/// uniformly in `0..=config.max_lag`.
pub fn generate_graph<R: Rng + ?Sized>(config: &GraphConfig, rng: &mut R) -> Result<DirectedGraph> {
    config.validate()?;
    for _ in 0..MAX_RESAMPLE_ATTEMPTS {
        let mut g = match config.model {
            GraphModel::Gnm => gen_gnm(config, rng)?,
            GraphModel::ShootingStar => gen_shooting_star(config.n, config.hub_degree)?,
            _ => gen_backbone(config, rng)?,
        };
        if is_nilpotent(&g) {
            continue;
        }
        assign_lags(&mut g, config.max_lag, rng);
        return Ok(g);
    }
    Err(Error::Config(format!(
        "no non-nilpotent {} graph with n={}, d_e={}, r_e={} after {MAX_RESAMPLE_ATTEMPTS} draws",
        config.model, config.n, config.density, config.reciprocity
    )))
}

fn unordered_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((u, v));
        }
    }
    pairs
}

fn split_counts(config: &GraphConfig) -> Result<(usize, usize)> {
    let m = config.edge_count();
    let p = config.reciprocal_pairs();
    let singles = m - 2 * p;
    let available = config.n * (config.n - 1) / 2;
    if p + singles > available {
        return Err(Error::Config(format!(
            "{m} edges with {p} reciprocal pairs need {} node pairs but only {available} exist",
            p + singles
        )));
    }
    Ok((p, singles))
}

/// Makes the first `p` backbone pairs bidirectional and orients the rest
/// uniformly at random.
fn orient<R: Rng + ?Sized>(
    n: usize,
    backbone: &[(usize, usize)],
    p: usize,
    rng: &mut R,
) -> Result<DirectedGraph> {
    let mut g = DirectedGraph::new(n);
    for (idx, &(u, v)) in backbone.iter().enumerate() {
        if idx < p {
            g.add_edge(u, v, 0)?;
            g.add_edge(v, u, 0)?;
        } else if rng.random_bool(0.5) {
            g.add_edge(u, v, 0)?;
        } else {
            g.add_edge(v, u, 0)?;
        }
    }
    Ok(g)
}

/// Directed G(n, m): `p` reciprocal pairs on uniformly chosen node pairs plus
/// `m - 2p` single edges on further untouched pairs with random orientation.
pub fn gen_gnm<R: Rng + ?Sized>(config: &GraphConfig, rng: &mut R) -> Result<DirectedGraph> {
    config.validate()?;
    let (p, singles) = split_counts(config)?;
    let pairs = unordered_pairs(config.n);
    let chosen: Vec<(usize, usize)> = index::sample(rng, pairs.len(), p + singles)
        .iter()
        .map(|i| pairs[i])
        .collect();
    orient(config.n, &chosen, p, rng)
}

/// Builds an undirected backbone of `p + (m - 2p)` edges from the configured
/// model and orients it: `p` random backbone edges become bidirectional and
/// the rest get a random direction.
pub fn gen_backbone<R: Rng + ?Sized>(config: &GraphConfig, rng: &mut R) -> Result<DirectedGraph> {
    config.validate()?;
    let (p, singles) = split_counts(config)?;
    let total = p + singles;
    let n = config.n;
    let mut backbone = match config.model {
        GraphModel::Er | GraphModel::Gnm => {
            let pairs = unordered_pairs(n);
            index::sample(rng, pairs.len(), total)
                .iter()
                .map(|i| pairs[i])
                .collect()
        }
        GraphModel::Rr => ring_lattice(n, total, rng)?,
        GraphModel::Sw => {
            let mut edges = ring_lattice(n, total, rng)?;
            rewire(n, &mut edges, config.rewiring, rng);
            edges
        }
        GraphModel::Ba => barabasi_albert(n, total, rng)?,
        GraphModel::ShootingStar => {
            return gen_shooting_star(n, config.hub_degree);
        }
    };
    backbone.shuffle(rng);
    orient(n, &backbone, p, rng)
}

/// Ring lattice with `count` edges: whole shells of ring distance 1, 2, ...
/// and a random subset of the first shell that does not fit completely.
fn ring_lattice<R: Rng + ?Sized>(
    n: usize,
    count: usize,
    rng: &mut R,
) -> Result<Vec<(usize, usize)>> {
    let mut edges = Vec::with_capacity(count);
    for d in 1..=n / 2 {
        let need = count - edges.len();
        if need == 0 {
            break;
        }
        let shell: Vec<(usize, usize)> = (0..n)
            .filter(|&i| !(2 * d == n && i >= d))
            .map(|i| {
                let j = (i + d) % n;
                (i.min(j), i.max(j))
            })
            .collect();
        if shell.len() <= need {
            edges.extend(shell);
        } else {
            let mut picked: Vec<usize> = index::sample(rng, shell.len(), need).into_vec();
            picked.sort_unstable();
            edges.extend(picked.into_iter().map(|i| shell[i]));
        }
    }
    if edges.len() < count {
        return Err(Error::Config(format!(
            "ring lattice on {n} nodes cannot hold {count} edges"
        )));
    }
    Ok(edges)
}

/// Watts-Strogatz rewiring: each edge `(u, v)` is replaced with probability
/// `beta` by `(u, w)` for a uniformly chosen non-neighbour `w` of `u`.
fn rewire<R: Rng + ?Sized>(n: usize, edges: &mut [(usize, usize)], beta: f64, rng: &mut R) {
    if beta <= 0.0 {
        return;
    }
    let mut present: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
    for slot in edges.iter_mut() {
        if !rng.random_bool(beta) {
            continue;
        }
        let (u, v) = *slot;
        let candidates: Vec<usize> = (0..n)
            .filter(|&w| w != u && !present.contains(&(u.min(w), u.max(w))))
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let w = candidates[rng.random_range(0..candidates.len())];
        present.remove(&(u, v));
        let edge = (u.min(w), u.max(w));
        present.insert(edge);
        *slot = edge;
    }
}

fn pick_weighted<R: Rng + ?Sized>(candidates: &[usize], weights: &[usize], rng: &mut R) -> usize {
    let total: usize = candidates.iter().map(|&c| weights[c]).sum();
    if total == 0 {
        return candidates[rng.random_range(0..candidates.len())];
    }
    let mut r = rng.random_range(0..total);
    for &c in candidates {
        if r < weights[c] {
            return c;
        }
        r -= weights[c];
    }
    *candidates.last().expect("non-empty candidates")
}

/// Preferential attachment with `count` edges.
///
/// The attachment parameter `a` is the largest value whose base graph
/// (a clique on `a + 1` seed nodes plus `a` edges per later node) fits in
/// `count`; remaining edges join a random node to a degree-weighted
/// non-neighbour.
fn barabasi_albert<R: Rng + ?Sized>(
    n: usize,
    count: usize,
    rng: &mut R,
) -> Result<Vec<(usize, usize)>> {
    let base = |a: usize| a * (a + 1) / 2 + (n - a - 1) * a;
    let a = (1..n).take_while(|&a| base(a) <= count).last().ok_or_else(|| {
        Error::Config(format!(
            "preferential attachment on {n} nodes needs at least {} edges, got {count}",
            n - 1
        ))
    })?;

    let mut present = BTreeSet::new();
    let mut degree = vec![0usize; n];
    let mut edges = Vec::with_capacity(count);
    let mut link = |u: usize, v: usize, degree: &mut [usize]| {
        let e = (u.min(v), u.max(v));
        present.insert(e);
        edges.push(e);
        degree[u] += 1;
        degree[v] += 1;
    };
    for u in 0..=a {
        for v in u + 1..=a {
            link(u, v, &mut degree);
        }
    }
    for v in a + 1..n {
        let mut pool: Vec<usize> = (0..v).collect();
        for _ in 0..a {
            let t = pick_weighted(&pool, &degree, rng);
            pool.retain(|&c| c != t);
            link(t, v, &mut degree);
        }
    }

    while edges.len() < count {
        let open: Vec<usize> = (0..n).filter(|&u| degree[u] < n - 1).collect();
        let u = open[rng.random_range(0..open.len())];
        let pool: Vec<usize> = (0..n)
            .filter(|&w| w != u && !present.contains(&(u.min(w), u.max(w))))
            .collect();
        let w = pick_weighted(&pool, &degree, rng);
        let e = (u.min(w), u.max(w));
        present.insert(e);
        edges.push(e);
        degree[u] += 1;
        degree[w] += 1;
    }
    Ok(edges)
}

/// Fully bidirectional shooting-star network: hub `0` with `hub_degree - 1`
/// leaves, plus a path over the remaining nodes whose first node is linked
/// to the hub.
pub fn gen_shooting_star(n: usize, hub_degree: usize) -> Result<DirectedGraph> {
    if n < 3 || hub_degree < 2 || hub_degree > n - 1 {
        return Err(Error::Config(format!(
            "shooting star needs n >= 3 and 2 <= K <= n - 1 (n={n}, K={hub_degree})"
        )));
    }
    let mut g = DirectedGraph::new(n);
    let mut link = |u: usize, v: usize| -> Result<()> {
        g.add_edge(u, v, 0)?;
        g.add_edge(v, u, 0)
    };
    for leaf in 1..hub_degree {
        link(0, leaf)?;
    }
    link(0, hub_degree)?;
    for v in hub_degree..n - 1 {
        link(v, v + 1)?;
    }
    Ok(g)
}

/// Assigns every edge an independent uniform lag in `0..=max_lag`.
pub fn assign_lags<R: Rng + ?Sized>(g: &mut DirectedGraph, max_lag: u32, rng: &mut R) {
    let edges: Vec<_> = g.edges().map(|(e, _)| e).collect();
    for e in edges {
        let lag = if max_lag == 0 {
            0
        } else {
            rng.random_range(0..=max_lag)
        };
        g.set_lag(e, lag);
    }
}
