use std::fmt::Write as _;

use super::{PemKind, PemMatrix};
use crate::error::{Error, Result};
use crate::numerics::DenseMatrix;

/// Text form: a header
/// `pem <n> kind=<k> dt_tau=<v|none> estimated=<0|1> clamped=<0|1> delta_hat=<d> order=<p|none>`
/// followed by `n` rows of `n` values, the diagonal written as `NaN`.
pub fn write_pem_matrix(pem: &PemMatrix) -> String {
    let n = pem.node_count();
    let opt = |v: Option<String>| v.unwrap_or_else(|| "none".into());
    let mut out = String::new();
    let _ = writeln!(
        out,
        "pem {n} kind={} dt_tau={} estimated={} clamped={} delta_hat={} order={}",
        pem.kind,
        opt(pem.dt_tau.map(|v| v.to_string())),
        u8::from(pem.dt_tau_estimated),
        u8::from(pem.dt_tau_clamped),
        pem.delta_hat,
        opt(pem.order.map(|v| v.to_string())),
    );
    for i in 0..n {
        for j in 0..n {
            if j > 0 {
                out.push(' ');
            }
            if i == j {
                out.push_str("NaN");
            } else {
                let _ = write!(out, "{}", pem.values[(i, j)]);
            }
        }
        out.push('\n');
    }
    out
}

/// Parses [`write_pem_matrix`] output. Diagonal entries must be `NaN`;
/// off-diagonal entries must be finite.
pub fn parse_pem_matrix(text: &str, source_name: &str) -> Result<PemMatrix> {
    let err = |line: usize, msg: String| Error::parse(source_name, line, msg);
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines
        .next()
        .ok_or_else(|| err(1, "empty PEM matrix".into()))?;
    let mut fields = header.split_whitespace();
    if fields.next() != Some("pem") {
        return Err(err(hline, "header must start with 'pem'".into()));
    }
    let n: usize = fields
        .next()
        .and_then(|t| t.parse().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| err(hline, "missing or invalid node count".into()))?;

    let mut kind = None;
    let mut dt_tau = None;
    let mut estimated = false;
    let mut clamped = false;
    let mut delta_hat = 0u32;
    let mut order = None;
    for field in fields {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| err(hline, format!("expected key=value, found '{field}'")))?;
        let bad = || err(hline, format!("invalid value for {key}: '{value}'"));
        match key {
            "kind" => kind = Some(value.parse::<PemKind>().map_err(|_| bad())?),
            "dt_tau" => {
                dt_tau = match value {
                    "none" => None,
                    v => Some(v.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(bad)?),
                }
            }
            "estimated" | "clamped" => {
                let flag = match value {
                    "0" => false,
                    "1" => true,
                    _ => return Err(bad()),
                };
                if key == "estimated" {
                    estimated = flag;
                } else {
                    clamped = flag;
                }
            }
            "delta_hat" => delta_hat = value.parse().map_err(|_| bad())?,
            "order" => {
                order = match value {
                    "none" => None,
                    v => Some(v.parse().map_err(|_| bad())?),
                }
            }
            _ => return Err(err(hline, format!("unknown header field '{key}'"))),
        }
    }
    let kind = kind.ok_or_else(|| err(hline, "header lacks kind=".into()))?;

    let rows: Vec<(usize, &str)> = lines.collect();
    if let Some(&(lineno, _)) = rows.get(n) {
        return Err(err(lineno, format!("more than {n} rows")));
    }
    if rows.len() != n {
        return Err(err(hline, format!("expected {n} rows, found {}", rows.len())));
    }
    let mut values = DenseMatrix::zeros(n, n);
    for (row, (lineno, line)) in rows.into_iter().enumerate() {
        let tokens: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.len() != n {
            return Err(err(lineno, format!("expected {n} values, found {}", tokens.len())));
        }
        for (col, tok) in tokens.iter().enumerate() {
            let v: f64 = tok
                .parse()
                .map_err(|_| err(lineno, format!("invalid value '{tok}'")))?;
            if col == row {
                if !v.is_nan() {
                    return Err(err(lineno, "diagonal entry must be NaN".into()));
                }
            } else if !v.is_finite() {
                return Err(err(lineno, format!("non-finite off-diagonal value '{tok}'")));
            }
            values[(row, col)] = v;
        }
    }
    Ok(PemMatrix {
        kind,
        values,
        dt_tau,
        dt_tau_estimated: estimated,
        dt_tau_clamped: clamped,
        delta_hat,
        order,
        failed_pairs: Vec::new(),
    })
}
