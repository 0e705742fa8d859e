use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Least-squares fit result.
#[derive(Clone, Debug)]
pub struct OlsFit {
    pub coefficients: Vec<f64>,
    /// Residual sum of squares divided by `T - q`.
    pub residual_variance: f64,
}

// relative size below which an R diagonal entry counts as zero
const RANK_TOL: f64 = 1e-10;

/// Ordinary least squares `y ~ X` via Householder QR.
///
/// `design` is `T x q` with `T > q >= 1`. Fails with [`Error::Singular`] when
/// the design is rank deficient.
pub fn ols_fit(y: &DVector<f64>, design: &DMatrix<f64>) -> Result<OlsFit> {
    let (t, q) = design.shape();
    if q == 0 || t <= q {
        return Err(Error::InsufficientData(format!(
            "least squares needs more rows than columns (T={t}, q={q})"
        )));
    }
    if y.len() != t {
        return Err(Error::Config(format!(
            "response length {} does not match design rows {t}",
            y.len()
        )));
    }
    let qr = design.clone().qr();
    let r = qr.r();
    let scale = (0..q).map(|i| r[(i, i)].abs()).fold(0.0_f64, f64::max);
    let column_scale = design
        .column_iter()
        .map(|c| c.norm())
        .fold(0.0_f64, f64::max);
    if scale == 0.0 || (0..q).any(|i| r[(i, i)].abs() <= RANK_TOL * column_scale) {
        return Err(Error::Singular(format!("rank-deficient design ({t}x{q})")));
    }
    let qty = qr.q().transpose() * y;
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::Singular("triangular solve failed".into()))?;
    let residual = y - design * &beta;
    Ok(OlsFit {
        coefficients: beta.iter().copied().collect(),
        residual_variance: residual.norm_squared() / (t - q) as f64,
    })
}
