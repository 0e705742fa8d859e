use std::fmt::Write as _;

use super::{lagged_row, MotifParams};
use crate::error::{Error, Result};

/// Walk lengths above this are refused; contributions grow factorially.
pub const MAX_TABLE_LENGTH: u32 = 12;

// relative gap under which two contributions count as tied for the maximum
const TIE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableRow {
    pub k: u32,
    pub l_b: u32,
    pub l_f: u32,
    pub value: f64,
    /// Largest contribution for this `k` among motifs other than `(0, 0)`,
    /// which only feeds the diagonal. Ties are all marked.
    pub is_argmax: bool,
}

/// Every `c^(k)_{l_b,l_f}` with `l_b, l_f <= l_max` for each requested `k`,
/// ordered by `k`, then `l_b`, then `l_f`.
pub fn contribution_table(k_values: &[u32], l_max: u32, params: &MotifParams) -> Result<Vec<TableRow>> {
    if l_max > MAX_TABLE_LENGTH {
        return Err(Error::Config(format!(
            "contribution tables are limited to walk length {MAX_TABLE_LENGTH}, got {l_max}"
        )));
    }
    let mut rows = Vec::new();
    for &k in k_values {
        let start = rows.len();
        for l_b in 0..=l_max {
            let values = lagged_row(k, l_b, l_max, params)?;
            for (l_f, value) in values.into_iter().enumerate() {
                rows.push(TableRow {
                    k,
                    l_b,
                    l_f: l_f as u32,
                    value,
                    is_argmax: false,
                });
            }
        }
        let block = &mut rows[start..];
        let best = block
            .iter()
            .filter(|r| (r.l_b, r.l_f) != (0, 0))
            .map(|r| r.value)
            .fold(f64::NEG_INFINITY, f64::max);
        for r in block.iter_mut() {
            r.is_argmax = (r.l_b, r.l_f) != (0, 0) && r.value >= best - TIE_TOL * best.abs();
        }
    }
    Ok(rows)
}

/// CSV with header `k,lB,lF,value,is_argmax`; values carry 17 significant
/// digits.
pub fn write_contribution_table(rows: &[TableRow]) -> String {
    let mut out = String::from("k,lB,lF,value,is_argmax\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:.16e},{}",
            r.k,
            r.l_b,
            r.l_f,
            r.value,
            u8::from(r.is_argmax)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argmax(rows: &[TableRow], k: u32) -> Vec<(u32, u32)> {
        rows.iter()
            .filter(|r| r.k == k && r.is_argmax)
            .map(|r| (r.l_b, r.l_f))
            .collect()
    }

    fn at(dt_tau: f64) -> MotifParams {
        MotifParams {
            dt_tau,
            ..MotifParams::default()
        }
    }

    #[test]
    fn var_limit_prefers_confounder() {
        let rows = contribution_table(&[0], 6, &at(1.0)).unwrap();
        assert_eq!(argmax(&rows, 0), vec![(1, 1)]);
    }

    #[test]
    fn continuous_limit_ties_direct_edges() {
        let rows = contribution_table(&[0], 6, &at(1e-4)).unwrap();
        assert_eq!(argmax(&rows, 0), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn lagged_forward_walks_dominate() {
        let rows = contribution_table(&[3], 8, &at(0.8)).unwrap();
        assert_eq!(argmax(&rows, 3), vec![(0, 3)]);
    }

    #[test]
    fn table_shape_and_guard() {
        let rows = contribution_table(&[0, 1, 2], 4, &at(0.5)).unwrap();
        assert_eq!(rows.len(), 3 * 25);
        assert_eq!((rows[26].k, rows[26].l_b, rows[26].l_f), (1, 0, 1));
        assert!(contribution_table(&[0], 13, &at(0.5)).is_err());
    }

    #[test]
    fn csv_format() {
        let rows = contribution_table(&[0], 1, &at(1.0)).unwrap();
        let csv = write_contribution_table(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "k,lB,lF,value,is_argmax");
        assert_eq!(lines.len(), 5);
        assert!(lines[4].starts_with("0,1,1,3.24000000000000") && lines[4].ends_with("e-3,1"));
        let digits = lines[1].split(',').nth(3).unwrap().split('e').next().unwrap();
        assert_eq!(digits.chars().filter(|c| c.is_ascii_digit()).count(), 17);
    }
}
