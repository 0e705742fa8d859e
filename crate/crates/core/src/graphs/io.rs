use std::fmt::Write as _;

use super::DirectedGraph;
use crate::error::{Error, Result};

/// Serializes as a header line `n m delta` followed by one `source target lag`
/// line per edge.
pub fn write_edge_list(g: &DirectedGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", g.node_count(), g.edge_count(), g.max_lag());
    for (e, lag) in g.edges() {
        let _ = writeln!(out, "{} {} {}", e.source, e.target, lag);
    }
    out
}

fn field<T: std::str::FromStr>(
    token: Option<&str>,
    what: &str,
    source_name: &str,
    line: usize,
) -> Result<T> {
    let token = token.ok_or_else(|| Error::parse(source_name, line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| Error::parse(source_name, line, format!("invalid {what} '{token}'")))
}

/// Parses the edge-list format produced by [`write_edge_list`]. Blank lines
/// and lines starting with `#` are ignored.
pub fn parse_edge_list(text: &str, source_name: &str) -> Result<DirectedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(source_name, 1, "empty edge list"))?;
    let mut tokens = header.split_whitespace();
    let n: usize = field(tokens.next(), "node count", source_name, hline)?;
    let m: usize = field(tokens.next(), "edge count", source_name, hline)?;
    let delta: u32 = field(tokens.next(), "max lag", source_name, hline)?;
    if tokens.next().is_some() {
        return Err(Error::parse(source_name, hline, "header must be 'n m delta'"));
    }
    if n == 0 {
        return Err(Error::parse(source_name, hline, "node count must be positive"));
    }

    let mut g = DirectedGraph::new(n);
    let mut seen = 0usize;
    for (lineno, line) in lines {
        let mut tokens = line.split_whitespace();
        let source: usize = field(tokens.next(), "source", source_name, lineno)?;
        let target: usize = field(tokens.next(), "target", source_name, lineno)?;
        let lag: u32 = field(tokens.next(), "lag", source_name, lineno)?;
        if tokens.next().is_some() {
            return Err(Error::parse(source_name, lineno, "edge line must be 'source target lag'"));
        }
        if source == target {
            return Err(Error::parse(source_name, lineno, format!("self-loop on node {source}")));
        }
        if source >= n || target >= n {
            return Err(Error::parse(
                source_name,
                lineno,
                format!("node index out of range 0..{n}"),
            ));
        }
        if lag > delta {
            return Err(Error::parse(
                source_name,
                lineno,
                format!("lag {lag} exceeds header max lag {delta}"),
            ));
        }
        if g.has_edge(source, target) {
            return Err(Error::parse(
                source_name,
                lineno,
                format!("duplicate edge {source} -> {target}"),
            ));
        }
        g.add_edge(source, target, lag)?;
        seen += 1;
    }
    if seen != m {
        return Err(Error::parse(
            source_name,
            hline,
            format!("header declares {m} edges but {seen} were listed"),
        ));
    }
    Ok(g)
}
