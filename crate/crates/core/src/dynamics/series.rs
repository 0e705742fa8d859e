use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Uniformly sampled multivariate time series, stored row-major (`N x n`).
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    n: usize,
    dt: f64,
    values: Vec<f64>,
}

impl TimeSeries {
    /// `values` holds `N` consecutive states of `n` nodes each.
    pub fn new(n: usize, dt: f64, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("time series needs at least one node".into()));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Config(format!("sampling period must be positive, got {dt}")));
        }
        if !values.len().is_multiple_of(n) {
            return Err(Error::Config(format!(
                "{} values do not split into rows of {n}",
                values.len()
            )));
        }
        if values.len() / n < 2 {
            return Err(Error::InsufficientData("time series needs at least 2 samples".into()));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!(
                "non-finite value at sample {}, node {}",
                pos / n,
                pos % n
            )));
        }
        Ok(TimeSeries { n, dt, values })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// State at sample `t`.
    pub fn row(&self, t: usize) -> &[f64] {
        &self.values[t * self.n..(t + 1) * self.n]
    }

    pub fn get(&self, t: usize, node: usize) -> f64 {
        self.values[t * self.n + node]
    }

    pub fn column(&self, node: usize) -> Vec<f64> {
        self.values.iter().skip(node).step_by(self.n).copied().collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.n)
    }
}

/// Header `n N dt`, then one whitespace-separated row per sample. Values use
/// the shortest representation that parses back to the same `f64`.
pub fn write_time_series(ts: &TimeSeries) -> String {
    let mut out = String::with_capacity(ts.values.len() * 22);
    let _ = writeln!(out, "{} {} {}", ts.n, ts.len(), ts.dt);
    for row in ts.rows() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}

/// Parses [`write_time_series`] output. Commas are accepted as separators;
/// blank lines and `#` comments are skipped.
pub fn parse_time_series(text: &str, source_name: &str) -> Result<TimeSeries> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(source_name, 1, "empty time series"))?;
    let fields: Vec<&str> = tokens(header).collect();
    if fields.len() != 3 {
        return Err(Error::parse(source_name, hline, "header must be 'n N dt'"));
    }
    let n: usize = fields[0]
        .parse()
        .map_err(|_| Error::parse(source_name, hline, format!("invalid node count '{}'", fields[0])))?;
    let samples: usize = fields[1]
        .parse()
        .map_err(|_| Error::parse(source_name, hline, format!("invalid sample count '{}'", fields[1])))?;
    let dt: f64 = fields[2]
        .parse()
        .map_err(|_| Error::parse(source_name, hline, format!("invalid dt '{}'", fields[2])))?;
    if n == 0 || samples < 2 {
        return Err(Error::parse(source_name, hline, "need n >= 1 and N >= 2"));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::parse(source_name, hline, "dt must be positive and finite"));
    }

    let mut values = Vec::with_capacity(n.saturating_mul(samples).min(text.len() / 2));
    let mut rows = 0usize;
    for (lineno, line) in lines {
        let before = values.len();
        for tok in tokens(line) {
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::parse(source_name, lineno, format!("invalid value '{tok}'")))?;
            if !v.is_finite() {
                return Err(Error::parse(source_name, lineno, "non-finite value"));
            }
            values.push(v);
        }
        if values.len() - before != n {
            return Err(Error::parse(
                source_name,
                lineno,
                format!("expected {n} values, found {}", values.len() - before),
            ));
        }
        rows += 1;
        if rows > samples {
            return Err(Error::parse(source_name, lineno, format!("more than {samples} rows")));
        }
    }
    if rows != samples {
        return Err(Error::parse(
            source_name,
            hline,
            format!("header declares {samples} rows but {rows} were found"),
        ));
    }
    TimeSeries::new(n, dt, values)
}

fn tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
}
