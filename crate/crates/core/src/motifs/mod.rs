//! Process-motif contributions to the (lagged) steady-state covariance of
//! the OUP, SDD and VAR(1) models, covariance reconstruction from motif
//! series, and contribution tables.

mod series;
mod table;

pub use series::{covariance_series, oup_covariance_series, SeriesResult};
pub use series::{DEFAULT_SERIES_L_MAX, DEFAULT_SERIES_TOL};
pub use table::{contribution_table, write_contribution_table, TableRow, MAX_TABLE_LENGTH};

use crate::error::{Error, Result};
use crate::numerics::binomial;

/// Motif `(l_b, l_f)`: a backward walk of length `l_b` and a forward walk of
/// length `l_f` from a common source, with optional summed transmission
/// delays along each walk.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct MotifIndex {
    pub l_b: u32,
    pub l_f: u32,
    pub delay_b: u32,
    pub delay_f: u32,
}

impl MotifIndex {
    pub fn new(l_b: u32, l_f: u32) -> Self {
        MotifIndex {
            l_b,
            l_f,
            delay_b: 0,
            delay_f: 0,
        }
    }

    pub fn with_delays(self, delay_b: u32, delay_f: u32) -> Self {
        MotifIndex {
            delay_b,
            delay_f,
            ..self
        }
    }

    pub fn length(&self) -> u32 {
        self.l_b + self.l_f
    }
}

/// Model constants entering the motif contributions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MotifParams {
    /// Coupling strength `epsilon`.
    pub eps: f64,
    pub tau: f64,
    pub sigma: f64,
    /// Node count `n` in the `tau sigma^2 / n` prefactor.
    pub n: usize,
    /// Sampling period in units of `tau`.
    pub dt_tau: f64,
}

impl Default for MotifParams {
    fn default() -> Self {
        MotifParams {
            eps: 0.9,
            tau: 1.0,
            sigma: 0.2,
            n: 10,
            dt_tau: 0.5,
        }
    }
}

impl MotifParams {
    fn prefactor(&self) -> f64 {
        self.tau * self.sigma * self.sigma / self.n as f64
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("node count must be positive".into()));
        }
        if !(self.tau > 0.0) {
            return Err(Error::Config(format!("tau must be positive, got {}", self.tau)));
        }
        Ok(())
    }
}

// above this walk length the direct product can overflow; switch to logs
const DIRECT_PSI_LIMIT: u32 = 256;

/// `psi_{p,q}(z)`, the node-dynamics weight of motif `(p, q)`.
///
/// Evaluated in the Euler-transformed form
/// `binom(M, d) (1 - z)^d (2 - z)^-(p + q + 1) 2F1(-m, -m; d + 1; (1 - z)^2)`
/// with `M = max(p, q)`, `m = min(p, q)`, `d = |p - q|`, which equals the
/// Gauss-series definition and stays exact as `z -> 0`.
pub fn psi(p: u32, q: u32, z: f64) -> Result<f64> {
    if !(z > 0.0 && z <= 1.0) {
        return Err(Error::Domain(format!("psi needs z in (0, 1], got {z}")));
    }
    if z == 1.0 {
        return Ok(if p == q { 1.0 } else { 0.0 });
    }
    let (hi, lo) = (p.max(q), p.min(q));
    let d = hi - lo;
    let x = (1.0 - z) * (1.0 - z);
    let total = f64::from(p) + f64::from(q) + 1.0;
    if hi <= DIRECT_PSI_LIMIT {
        let poly = crate::numerics::terminating_polynomial(hi + 1, d + 1, x)?;
        Ok(binomial(hi, d) * (1.0 - z).powi(d as i32) * (2.0 - z).powf(-total) * poly)
    } else {
        let ln_value = ln_binomial(hi, d) + f64::from(d) * (1.0 - z).ln() - total * (2.0 - z).ln()
            + ln_terminating(lo, d, x);
        Ok(ln_value.exp())
    }
}

fn ln_binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k)
        .map(|i| f64::from(n - i).ln() - f64::from(i + 1).ln())
        .sum()
}

/// `ln 2F1(-m, -m; d + 1; x)` via a log-sum-exp over its positive terms.
fn ln_terminating(m: u32, d: u32, x: f64) -> f64 {
    if m == 0 || x == 0.0 {
        return 0.0;
    }
    let ln_x = x.ln();
    let mut logs = Vec::with_capacity(m as usize + 1);
    let mut current = 0.0_f64;
    logs.push(current);
    for j in 0..m {
        let jf = f64::from(j);
        current += 2.0 * (f64::from(m) - jf).ln() - (f64::from(d) + 1.0 + jf).ln() - (jf + 1.0).ln()
            + ln_x;
        logs.push(current);
    }
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln()
}

fn check_dt_tau(z: f64) -> Result<()> {
    if !(z > 0.0 && z <= 1.0) {
        return Err(Error::Domain(format!("dt_tau must lie in (0, 1], got {z}")));
    }
    Ok(())
}

/// Lag-0 SDD contribution `c^(0)_{l_b,l_f} = (tau sigma^2 / n) eps^L psi_{l_b,l_f}(dt_tau)`.
pub fn contribution_cov(l_b: u32, l_f: u32, params: &MotifParams) -> Result<f64> {
    params.check()?;
    check_dt_tau(params.dt_tau)?;
    Ok(params.prefactor() * params.eps.powi((l_b + l_f) as i32) * psi(l_b, l_f, params.dt_tau)?)
}

/// Lag-`k` contributions `c^(k)_{l_b, f}` for `f = 0..=f_max`, from the
/// recursion `c^(k)_{b,f} = (1 - z) c^(k-1)_{b,f} + eps z c^(k-1)_{b,f-1}`
/// with `c_{b,-1} = 0`.
pub(crate) fn lagged_row(k: u32, l_b: u32, f_max: u32, params: &MotifParams) -> Result<Vec<f64>> {
    let mut row = (0..=f_max)
        .map(|f| contribution_cov(l_b, f, params))
        .collect::<Result<Vec<f64>>>()?;
    let z = params.dt_tau;
    let keep = 1.0 - z;
    let push = params.eps * z;
    for _ in 0..k {
        for f in (0..row.len()).rev() {
            let shifted = if f > 0 { row[f - 1] } else { 0.0 };
            row[f] = keep * row[f] + push * shifted;
        }
    }
    Ok(row)
}

/// Lag-`k` SDD contribution `c^(k)_{l_b,l_f}`.
pub fn contribution_lagk(k: u32, l_b: u32, l_f: u32, params: &MotifParams) -> Result<f64> {
    if k == 0 {
        return contribution_cov(l_b, l_f, params);
    }
    Ok(lagged_row(k, l_b, l_f, params)?[l_f as usize])
}

/// OUP contribution `tau sigma^2 eps^L / (2^(L+1) n) binom(L, l_f)`.
pub fn contribution_oup(l_b: u32, l_f: u32, eps: f64, tau: f64, sigma: f64, n: usize) -> f64 {
    let l = l_b + l_f;
    tau * sigma * sigma * eps.powi(l as i32) / (2f64.powi(l as i32 + 1) * n as f64)
        * binomial(l, l_f)
}

/// Contribution of a motif whose walks accumulate transmission delays:
/// `c^(k)_{l_b + delay_b, l_f + delay_f} / (eps dt_tau)^(delay_b + delay_f)`.
pub fn contribution_delayed(k: u32, idx: MotifIndex, params: &MotifParams) -> Result<f64> {
    let delays = idx.delay_b + idx.delay_f;
    let push = params.eps * params.dt_tau;
    if delays > 0 && push == 0.0 {
        return Err(Error::Domain(
            "delayed contributions need eps * dt_tau > 0".into(),
        ));
    }
    let base = contribution_lagk(k, idx.l_b + idx.delay_b, idx.l_f + idx.delay_f, params)?;
    Ok(base / push.powi(delays as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::hyp2f1_equal_ab;
    use proptest::prelude::*;

    fn params(eps: f64, dt_tau: f64) -> MotifParams {
        MotifParams {
            eps,
            dt_tau,
            ..MotifParams::default()
        }
    }

    /// `z^(p+q+1) sum_k binom(k, p) binom(k, q) (1 - z)^(2k - p - q)`
    fn psi_finite_sum(p: u32, q: u32, z: f64, terms: u32) -> f64 {
        let hi = p.max(q);
        let mut total = 0.0;
        for k in hi..hi + terms {
            total += binomial(k, p) * binomial(k, q) * (1.0 - z).powi((2 * k - p - q) as i32);
        }
        z.powi((p + q + 1) as i32) * total
    }

    fn psi_gauss(p: u32, q: u32, z: f64) -> f64 {
        let hi = p.max(q);
        let d = hi - p.min(q);
        z.powi((p + q + 1) as i32)
            * (1.0 - z).powi(d as i32)
            * binomial(hi, d)
            * hyp2f1_equal_ab(hi + 1, d + 1, (1.0 - z) * (1.0 - z)).unwrap()
    }

    #[test]
    fn psi_zero_zero_closed_form() {
        for &z in &[0.1, 0.5, 0.9, 1.0] {
            assert!((psi(0, 0, z).unwrap() - 1.0 / (2.0 - z)).abs() < 1e-15);
        }
        assert!((psi(0, 0, 0.5).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn psi_boundary_values() {
        assert_eq!(psi(2, 2, 1.0).unwrap(), 1.0);
        assert_eq!(psi(1, 3, 1.0).unwrap(), 0.0);
        assert!(psi(0, 0, 0.0).is_err());
        assert!(psi(0, 0, 1.5).is_err());
    }

    #[test]
    fn psi_matches_appendix_sum() {
        let v = psi(1, 0, 0.5).unwrap();
        assert!((v - psi_finite_sum(1, 0, 0.5, 1000)).abs() < 1e-10);
        for p in 0..6 {
            for q in 0..6 {
                for &z in &[0.3, 0.5, 0.8] {
                    let oracle = psi_finite_sum(p, q, z, 2000);
                    let v = psi(p, q, z).unwrap();
                    assert!((v - oracle).abs() < 1e-12 * oracle.max(1e-300), "{p} {q} {z}");
                }
            }
        }
    }

    #[test]
    fn psi_matches_gauss_series() {
        for p in 0..8 {
            for q in 0..8 {
                for &z in &[0.05, 0.2, 0.5, 0.9] {
                    let a = psi(p, q, z).unwrap();
                    let b = psi_gauss(p, q, z);
                    assert!(((a - b) / b).abs() < 1e-11, "{p} {q} {z}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn psi_log_route_agrees_with_direct() {
        for &(p, q) in &[(200, 150), (256, 3), (240, 240)] {
            for &z in &[0.01f64, 0.5] {
                let hi: u32 = p.max(q);
                let lo: u32 = p.min(q);
                let d = hi - lo;
                let x = (1.0 - z) * (1.0 - z);
                let total = f64::from(p + q + 1);
                let via_logs = (ln_binomial(hi, d) + f64::from(d) * (1.0 - z).ln()
                    - total * (2.0 - z).ln()
                    + ln_terminating(lo, d, x))
                .exp();
                let direct = psi(p, q, z).unwrap();
                assert!(((via_logs - direct) / direct).abs() < 1e-10, "{p} {q} {z}");
            }
        }
        assert!(psi(400, 380, 0.5).unwrap().is_finite());
    }

    #[test]
    fn contribution_examples() {
        let pr = params(0.9, 0.5);
        let base = pr.prefactor();
        assert!((contribution_cov(0, 0, &pr).unwrap() - base / 1.5).abs() < 1e-15);
        let var = params(0.7, 1.0);
        assert_eq!(contribution_cov(0, 1, &var).unwrap(), 0.0);
        assert!((contribution_cov(1, 1, &var).unwrap() - var.prefactor() * 0.49).abs() < 1e-15);
        let small = params(0.9, 1e-4);
        let oup = contribution_oup(1, 2, 0.9, 1.0, 0.2, 10);
        let expected = 0.2 * 0.2 * 0.9f64.powi(3) / (16.0 * 10.0) * 3.0;
        assert!((oup - expected).abs() < 1e-15);
        let sdd = contribution_cov(1, 2, &small).unwrap();
        assert!((sdd / oup - 1.0).abs() < 1e-3, "{sdd} vs {oup}");
    }

    #[test]
    fn oup_examples() {
        assert!((contribution_oup(0, 0, 0.9, 1.0, 0.2, 10) - 0.04 / 20.0).abs() < 1e-18);
        let a = contribution_oup(0, 1, 0.9, 1.0, 0.2, 10);
        let b = contribution_oup(1, 0, 0.9, 1.0, 0.2, 10);
        assert_eq!(a, b);
        assert!((a - 0.04 * 0.9 / 40.0).abs() < 1e-18);
    }

    #[test]
    fn lagk_recursion_cases() {
        let pr = params(0.8, 0.3);
        let z = pr.dt_tau;
        let c11 = contribution_lagk(1, 1, 1, &pr).unwrap();
        let expected = contribution_cov(1, 1, &pr).unwrap() * (1.0 - z)
            + contribution_cov(1, 0, &pr).unwrap() * pr.eps * z;
        assert!((c11 - expected).abs() < 1e-16);
        let c00 = contribution_lagk(1, 0, 0, &pr).unwrap();
        assert!((c00 - (1.0 - z) * contribution_cov(0, 0, &pr).unwrap()).abs() < 1e-16);
        for &eps in &[0.1, 0.5, 0.95] {
            let pr = params(eps, 0.37);
            let ratio = contribution_lagk(1, 1, 0, &pr).unwrap() / contribution_cov(1, 0, &pr).unwrap();
            assert!((ratio - 0.63).abs() < 1e-14);
        }
    }

    #[test]
    fn lagk_matches_binomial_unrolling() {
        let pr = params(0.9, 0.6);
        let z = pr.dt_tau;
        for k in 0..5u32 {
            for b in 0..4 {
                for f in 0..5u32 {
                    let mut oracle = 0.0;
                    for j in 0..=k.min(f) {
                        oracle += binomial(k, j)
                            * (1.0 - z).powi((k - j) as i32)
                            * (pr.eps * z).powi(j as i32)
                            * contribution_cov(b, f - j, &pr).unwrap();
                    }
                    let v = contribution_lagk(k, b, f, &pr).unwrap();
                    assert!((v - oracle).abs() < 1e-15 * (1.0 + oracle.abs()));
                }
            }
        }
    }

    #[test]
    fn delayed_contributions() {
        let pr = params(0.9, 0.8);
        let plain = MotifIndex::new(1, 2);
        assert_eq!(
            contribution_delayed(2, plain, &pr).unwrap(),
            contribution_lagk(2, 1, 2, &pr).unwrap()
        );
        let delayed = MotifIndex::new(0, 1).with_delays(0, 1);
        let v = contribution_delayed(2, delayed, &pr).unwrap();
        let expected = contribution_lagk(2, 0, 2, &pr).unwrap() / (0.9 * 0.8);
        assert!((v - expected).abs() < 1e-16);
        assert!(v > 0.0 && v.is_finite());
        let zero = params(0.0, 0.8);
        assert!(contribution_delayed(1, delayed, &zero).is_err());
    }

    proptest! {
        #[test]
        fn psi_symmetric(p in 0u32..40, q in 0u32..40, z in 1e-6f64..1.0) {
            prop_assert_eq!(psi(p, q, z).unwrap(), psi(q, p, z).unwrap());
        }

        #[test]
        fn var_limit_localizes(p in 0u32..20, q in 0u32..20, eps in 0.0f64..1.0) {
            let v = contribution_cov(p, q, &params(eps, 1.0)).unwrap();
            if p != q {
                prop_assert_eq!(v, 0.0);
            }
        }

        #[test]
        fn contributions_positive(
            k in 0u32..6, b in 0u32..6, f in 0u32..6,
            eps in 0.01f64..1.0, z in 0.01f64..0.99,
        ) {
            let v = contribution_lagk(k, b, f, &params(eps, z)).unwrap();
            prop_assert!(v > 0.0 && v.is_finite());
        }

        #[test]
        fn oup_limit_law(b in 0u32..=8, f in 0u32..=8) {
            prop_assume!(b + f <= 8);
            let sdd = contribution_cov(b, f, &params(0.9, 1e-5)).unwrap();
            let oup = contribution_oup(b, f, 0.9, 1.0, 0.2, 10);
            prop_assert!((sdd / oup - 1.0).abs() < 1e-3);
        }
    }
}
