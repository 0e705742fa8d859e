//! Gauss hypergeometric function `2F1(a, a; c; x)` for positive integer
//! parameters, the only case the motif contributions need.

use crate::error::{Error, Result};

const RELATIVE_STOP: f64 = 1e-15;
// bound on the neglected tail, relative to the partial sum
const TAIL_STOP: f64 = 1e-16;
const MAX_TERMS: usize = 1_000_000;

/// Neumaier-compensated running sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn check_args(a: u32, c: u32, x: f64) -> Result<()> {
    if a == 0 || c == 0 {
        return Err(Error::Domain(format!(
            "2F1 parameters must be positive integers (a={a}, c={c})"
        )));
    }
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain(format!("2F1 argument must lie in [0, 1), got {x}")));
    }
    Ok(())
}

/// `2F1(a, a; c; x)` by direct summation of the Gauss series.
///
/// Summation stops once the current term drops below `1e-15` times the
/// partial sum and the geometric bound on the remaining tail drops below
/// `1e-16` times the partial sum. Gives up after `10^6` terms.
pub fn hyp2f1_equal_ab(a: u32, c: u32, x: f64) -> Result<f64> {
    check_args(a, c, x)?;
    let (a, c) = (f64::from(a), f64::from(c));
    let mut acc = CompensatedSum::default();
    let mut term = 1.0_f64;
    for k in 0..MAX_TERMS {
        acc.add(term);
        let kf = k as f64;
        let ratio = (a + kf) * (a + kf) / ((c + kf) * (kf + 1.0)) * x;
        term *= ratio;
        if term == 0.0 {
            return Ok(acc.value());
        }
        // later ratios lie between the current one and their limit x
        let r = ratio.max(x);
        let sum = acc.value().abs();
        if ratio < 1.0 && term < RELATIVE_STOP * sum && term * r / (1.0 - r) < TAIL_STOP * sum {
            return Ok(acc.value());
        }
    }
    Err(Error::Convergence(format!(
        "2F1({a}, {a}; {c}; x) series did not converge within {MAX_TERMS} terms at x = {x}"
    )))
}

/// The terminating series `2F1(c - a, c - a; c; x)` for `c <= a`.
///
/// It is a polynomial of degree `a - c` with positive coefficients, so it can
/// be evaluated to full precision for any `x` in `[0, 1]`.
pub fn terminating_polynomial(a: u32, c: u32, x: f64) -> Result<f64> {
    if a == 0 || c == 0 || c > a {
        return Err(Error::Domain(format!(
            "terminating form needs 1 <= c <= a (a={a}, c={c})"
        )));
    }
    let degree = a - c;
    let c = f64::from(c);
    let mut sum = 0.0;
    let mut term = 1.0;
    for j in 0..=degree {
        sum += term;
        let jf = f64::from(j);
        let lowered = jf - f64::from(degree);
        term *= lowered * lowered / ((c + jf) * (jf + 1.0)) * x;
    }
    Ok(sum)
}

/// `2F1(a, a; c; x)` for `c <= a` via the Euler transformation
/// `2F1(a, a; c; x) = (1 - x)^(c - 2a) 2F1(c - a, c - a; c; x)`.
pub fn hyp2f1_equal_ab_euler(a: u32, c: u32, x: f64) -> Result<f64> {
    check_args(a, c, x)?;
    let poly = terminating_polynomial(a, c, x)?;
    let exponent = i32::try_from(i64::from(c) - 2 * i64::from(a))
        .map_err(|_| Error::Domain("2F1 parameters too large".into()))?;
    Ok((1.0 - x).powi(exponent) * poly)
}

/// Binomial coefficient as a float; exact for results below 2^53.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0_f64;
    for i in 0..k {
        acc = acc * f64::from(n - i) / f64::from(i + 1);
    }
    // the running product is an integer at every step; undo rounding drift
    if acc < 9.0e15 {
        acc.round()
    } else {
        acc
    }
}
