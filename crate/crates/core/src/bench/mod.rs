//! Thresholding, accuracy scoring, seeded benchmark trials, parameter sweeps
//! and timing runs.

mod sweep;
mod timing;
mod trial;

pub use sweep::{sweep, write_sweep_csv, SweepRow, SweepSpec, SWEEP_CSV_HEADER};
pub use timing::{bench_time, write_timing_csv, TimingRow, TimingSpec, TIMING_CSV_HEADER};
pub use trial::{
    run_trial, stream, trial_graph, TrialConfig, TrialFlags, TrialRecord, GRAPH_STREAM, NOISE_STREAM,
    SIMULATION_STREAM,
};

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graphs::DirectedGraph;
use crate::pem::PemMatrix;

/// The `m` largest off-diagonal entries become edges; entry `(i, j)` gives
/// edge `j -> i`. Ties go to the smaller `(row, column)` position.
pub fn threshold_pem(pem: &PemMatrix, m: usize) -> Result<DirectedGraph> {
    let n = pem.node_count();
    let pairs = n * n.saturating_sub(1);
    if m == 0 || m > pairs {
        return Err(Error::Config(format!(
            "edge count must lie in 1..={pairs}, got {m}"
        )));
    }
    let mut entries: Vec<(usize, usize, f64)> = pem.off_diagonal().collect();
    if let Some(&(i, j, _)) = entries.iter().find(|e| e.2.is_nan()) {
        return Err(Error::Degenerate(format!("PEM entry ({i}, {j}) is NaN")));
    }
    // stable sort keeps the row-major order among equal values
    entries.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap_or(Ordering::Equal));
    let mut g = DirectedGraph::new(n);
    for &(i, j, _) in &entries[..m] {
        g.add_edge(j, i, 0)?;
    }
    Ok(g)
}

/// Fraction of ordered pairs `i != j` classified alike (edge or non-edge)
/// in both graphs.
pub fn accuracy(inferred: &DirectedGraph, truth: &DirectedGraph) -> Result<f64> {
    let n = truth.node_count();
    if inferred.node_count() != n {
        return Err(Error::Config(format!(
            "graphs differ in size ({} vs {n})",
            inferred.node_count()
        )));
    }
    if n < 2 {
        return Err(Error::Config("accuracy needs at least 2 nodes".into()));
    }
    let mut agree = 0usize;
    for i in 0..n {
        for j in 0..n {
            if i != j && inferred.has_edge(i, j) == truth.has_edge(i, j) {
                agree += 1;
            }
        }
    }
    Ok(agree as f64 / (n * (n - 1)) as f64)
}

/// Expected accuracy of `m` edges placed uniformly at random:
/// `1 - 2 d (1 - d)` with `d = m / (n (n - 1))`.
pub fn baseline_accuracy(n: usize, m: usize) -> Result<f64> {
    let pairs = n * n.saturating_sub(1);
    if m == 0 || m > pairs {
        return Err(Error::Config(format!(
            "edge count must lie in 1..={pairs}, got {m}"
        )));
    }
    let d = m as f64 / pairs as f64;
    Ok(1.0 - 2.0 * d * (1.0 - d))
}

/// Average ranks, 1-based, ties sharing their mean rank.
fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut out = vec![0.0; xs.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && xs[order[end]] == xs[order[start]] {
            end += 1;
        }
        let mean = (start + end + 1) as f64 / 2.0;
        for &k in &order[start..end] {
            out[k] = mean;
        }
        start = end;
    }
    out
}

fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

/// Spearman rank correlation.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::Config(format!(
            "lengths differ ({} vs {})",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientData("Spearman correlation needs at least 3 points".into()));
    }
    if xs.iter().chain(ys).any(|v| v.is_nan()) {
        return Err(Error::Degenerate("NaN in Spearman input".into()));
    }
    pearson(&ranks(xs), &ranks(ys))
        .ok_or_else(|| Error::Degenerate("Spearman correlation of a constant sequence".into()))
}

/// Median of a non-empty sample.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let h = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[h]
    } else {
        0.5 * (v[h - 1] + v[h])
    })
}

/// SplitMix64 output function applied to `x`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` in sweep cell `cell`:
/// `splitmix64(splitmix64(splitmix64(master) ^ cell) ^ trial)`.
pub fn trial_seed(master: u64, cell: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ cell) ^ trial)
}

/// Formats like C's `%.10g`.
pub(crate) fn fmt_sig10(x: f64) -> String {
    const DIGITS: i32 = 10;
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_owned()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    }
}
