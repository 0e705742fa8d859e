//! Pairwise edge measures (PEMs): lagged correlation (LC), its corrections
//! for confounding factors (LCCF) and reverse causation (LCRC), and a
//! bivariate Granger-causality baseline (GC).
//!
//! Entry `(i, j)` of every PEM matrix scores the directed edge `j -> i`.

mod estimators;
mod gc;
mod io;

pub use estimators::{
    estimate_tau_inv, sample_lagged_corr, sample_lagged_cov, tau_inv_from_covariances,
    TauEstimate, DT_TAU_FLOOR,
};
pub use gc::pem_gc;
pub use io::{parse_pem_matrix, write_pem_matrix};

use std::fmt;
use std::str::FromStr;

use crate::dynamics::TimeSeries;
use crate::error::{Error, Result};
use crate::motifs::{contribution_cov, contribution_lagk, MotifParams};
use crate::numerics::DenseMatrix;
use estimators::LaggedStats;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PemKind {
    Lc,
    Lccf,
    Lcrc,
    Gc,
}

impl PemKind {
    pub const ALL: [PemKind; 4] = [PemKind::Lc, PemKind::Lccf, PemKind::Lcrc, PemKind::Gc];

    pub fn name(self) -> &'static str {
        match self {
            PemKind::Lc => "lc",
            PemKind::Lccf => "lccf",
            PemKind::Lcrc => "lcrc",
            PemKind::Gc => "gc",
        }
    }
}

impl fmt::Display for PemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PemKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown PEM '{s}' (expected lc, lccf, lcrc or gc)")))
    }
}

/// How the corrected PEMs obtain `dt_tau`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DtTau {
    Fixed(f64),
    /// Estimate from the data with [`estimate_tau_inv`].
    Auto,
}

/// A PEM value per ordered node pair. The diagonal is unused and holds NaN.
#[derive(Clone, Debug, PartialEq)]
pub struct PemMatrix {
    pub kind: PemKind,
    pub values: DenseMatrix,
    /// `dt_tau` used by a correction, if any.
    pub dt_tau: Option<f64>,
    /// True when `dt_tau` was estimated from the data.
    pub dt_tau_estimated: bool,
    /// True when the estimated `dt_tau` was clamped into `(0, 1]`.
    pub dt_tau_clamped: bool,
    pub delta_hat: u32,
    /// Regression order of GC.
    pub order: Option<u32>,
    /// Pairs `(i, j)` whose GC fit was rank deficient; their entry is 0.
    pub failed_pairs: Vec<(usize, usize)>,
}

impl PemMatrix {
    fn bare(kind: PemKind, mut values: DenseMatrix) -> Self {
        for i in 0..values.rows() {
            values[(i, i)] = f64::NAN;
        }
        PemMatrix {
            kind,
            values,
            dt_tau: None,
            dt_tau_estimated: false,
            dt_tau_clamped: false,
            delta_hat: 0,
            order: None,
            failed_pairs: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.values.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    /// Off-diagonal entries as `(i, j, value)` in row-major order.
    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.node_count();
        (0..n).flat_map(move |i| {
            (0..n)
                .filter(move |&j| j != i)
                .map(move |j| (i, j, self.values[(i, j)]))
        })
    }
}

/// Correction variant of lag-1 correlation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrectionKind {
    Lccf,
    Lcrc,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrectionFactor {
    pub alpha: f64,
    pub kind: CorrectionKind,
    pub dt_tau: f64,
}

impl CorrectionFactor {
    /// The motif-contribution ratio the factor is defined by:
    /// `c^(1)_{1,1} / c^(0)_{1,1}` for LCCF, `c^(1)_{1,0} / c^(0)_{1,0}` for LCRC.
    pub fn motif_ratio(&self, eps: f64) -> Result<f64> {
        let params = MotifParams {
            eps,
            tau: 1.0,
            sigma: 1.0,
            n: 1,
            dt_tau: self.dt_tau,
        };
        let l_f = match self.kind {
            CorrectionKind::Lccf => 1,
            CorrectionKind::Lcrc => 0,
        };
        Ok(contribution_lagk(1, 1, l_f, &params)? / contribution_cov(1, l_f, &params)?)
    }
}

fn check_dt_tau(dt_tau: f64) -> Result<()> {
    if dt_tau > 0.0 && dt_tau <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("dt_tau must lie in (0, 1], got {dt_tau}")))
    }
}

/// `alpha = 2 (1 - z) / (2 - 2 z + z^2)`.
pub fn alpha_lccf(dt_tau: f64) -> Result<CorrectionFactor> {
    check_dt_tau(dt_tau)?;
    let z = dt_tau;
    Ok(CorrectionFactor {
        alpha: 2.0 * (1.0 - z) / (2.0 - 2.0 * z + z * z),
        kind: CorrectionKind::Lccf,
        dt_tau,
    })
}

/// `alpha = 1 - z`.
pub fn alpha_lcrc(dt_tau: f64) -> Result<CorrectionFactor> {
    check_dt_tau(dt_tau)?;
    Ok(CorrectionFactor {
        alpha: 1.0 - dt_tau,
        kind: CorrectionKind::Lcrc,
        dt_tau,
    })
}

/// Lag-1 sample correlation `R^(1)`.
pub fn pem_lc(ts: &TimeSeries) -> Result<PemMatrix> {
    let stats = LaggedStats::new(ts);
    let sd = stats.std_devs()?;
    Ok(PemMatrix::bare(PemKind::Lc, stats.corr(1, &sd)?))
}

/// `max_{d <= delta_hat} [R^(1+d) - alpha_LCCF R^(d)]`.
pub fn pem_lccf(ts: &TimeSeries, dt_tau: DtTau, delta_hat: u32) -> Result<PemMatrix> {
    corrected(ts, CorrectionKind::Lccf, dt_tau, delta_hat)
}

/// `max_{d <= delta_hat} [R^(1+d) - alpha_LCRC R^(d)]`.
pub fn pem_lcrc(ts: &TimeSeries, dt_tau: DtTau, delta_hat: u32) -> Result<PemMatrix> {
    corrected(ts, CorrectionKind::Lcrc, dt_tau, delta_hat)
}

fn corrected(
    ts: &TimeSeries,
    kind: CorrectionKind,
    dt_tau: DtTau,
    delta_hat: u32,
) -> Result<PemMatrix> {
    let needed = delta_hat as usize + 3;
    if ts.len() < needed {
        return Err(Error::InsufficientData(format!(
            "delta_hat = {delta_hat} needs at least {needed} samples, have {}",
            ts.len()
        )));
    }
    let (z, estimated, clamped) = match dt_tau {
        DtTau::Fixed(z) => (z, false, false),
        DtTau::Auto => {
            let est = estimate_tau_inv(ts)?;
            (est.dt_tau, true, est.clamped)
        }
    };
    let factor = match kind {
        CorrectionKind::Lccf => alpha_lccf(z)?,
        CorrectionKind::Lcrc => alpha_lcrc(z)?,
    };
    let stats = LaggedStats::new(ts);
    let sd = stats.std_devs()?;
    let n = ts.node_count();
    let mut best = DenseMatrix::from_fn(n, n, |_, _| f64::NEG_INFINITY);
    let mut lower = stats.corr(0, &sd)?;
    for d in 0..=delta_hat as usize {
        let upper = stats.corr(d + 1, &sd)?;
        for i in 0..n {
            for j in 0..n {
                let v = upper[(i, j)] - factor.alpha * lower[(i, j)];
                if v > best[(i, j)] {
                    best[(i, j)] = v;
                }
            }
        }
        lower = upper;
    }
    let pem_kind = match kind {
        CorrectionKind::Lccf => PemKind::Lccf,
        CorrectionKind::Lcrc => PemKind::Lcrc,
    };
    let mut pem = PemMatrix::bare(pem_kind, best);
    pem.dt_tau = Some(z);
    pem.dt_tau_estimated = estimated;
    pem.dt_tau_clamped = clamped;
    pem.delta_hat = delta_hat;
    Ok(pem)
}

/// Computes one PEM. GC uses regression order `delta_hat + 1`; LC ignores
/// `dt_tau` and `delta_hat`.
pub fn compute_pem(
    ts: &TimeSeries,
    kind: PemKind,
    dt_tau: DtTau,
    delta_hat: u32,
) -> Result<PemMatrix> {
    match kind {
        PemKind::Lc => pem_lc(ts),
        PemKind::Lccf => pem_lccf(ts, dt_tau, delta_hat),
        PemKind::Lcrc => pem_lcrc(ts, dt_tau, delta_hat),
        PemKind::Gc => pem_gc(ts, delta_hat + 1),
    }
}
