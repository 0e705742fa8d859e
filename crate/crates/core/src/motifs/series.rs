use super::{contribution_cov, contribution_oup, MotifParams};
use crate::error::{Error, Result};
use crate::numerics::{binomial, spectral_radius, DenseMatrix};

pub const DEFAULT_SERIES_L_MAX: u32 = 2000;
pub const DEFAULT_SERIES_TOL: f64 = 1e-12;

/// Truncated motif-series covariance together with truncation diagnostics.
#[derive(Clone, Debug)]
pub struct SeriesResult {
    pub matrix: DenseMatrix,
    /// Largest walk length `L` included.
    pub layers: u32,
    /// Max-abs entry of the last included layer.
    pub last_increment: f64,
    /// False when `L_max` was reached before the increment fell below `tol`.
    pub converged: bool,
}

impl SeriesResult {
    pub fn warning(&self) -> Option<String> {
        if self.converged {
            None
        } else {
            Some(format!(
                "motif series not converged at L_max = {}: last layer increment {:.3e}",
                self.layers, self.last_increment
            ))
        }
    }
}

/// Sums `sum_L sum_{l_f} coeff(L - l_f, l_f) A^{l_f} (A^T)^{L - l_f}` layer by
/// layer until two consecutive layers fall below `tol` or `l_max` is reached.
fn sum_layers(
    adj: &DenseMatrix,
    l_max: u32,
    tol: f64,
    mut coeff: impl FnMut(u32, u32) -> Result<f64>,
) -> Result<SeriesResult> {
    let n = adj.rows();
    let adj_t = adj.transpose();
    let mut forward = vec![DenseMatrix::identity(n)];
    let mut backward = vec![DenseMatrix::identity(n)];
    let mut total = DenseMatrix::zeros(n, n);
    let mut quiet = 0;
    let mut last_increment = f64::INFINITY;
    for l in 0..=l_max {
        if l > 0 {
            let f = adj.matmul(&forward[l as usize - 1]);
            let b = backward[l as usize - 1].matmul(&adj_t);
            forward.push(f);
            backward.push(b);
        }
        let mut layer = DenseMatrix::zeros(n, n);
        for l_f in 0..=l {
            let l_b = l - l_f;
            let c = coeff(l_b, l_f)?;
            if c != 0.0 {
                layer.add_scaled(c, &forward[l_f as usize].matmul(&backward[l_b as usize]));
            }
        }
        last_increment = layer.max_abs();
        total = total.add(&layer);
        if !total.is_finite() {
            return Err(Error::Numerical(format!("motif series overflowed at L = {l}")));
        }
        quiet = if last_increment < tol { quiet + 1 } else { 0 };
        if quiet == 2 {
            return Ok(SeriesResult {
                matrix: total,
                layers: l,
                last_increment,
                converged: true,
            });
        }
    }
    Ok(SeriesResult {
        matrix: total,
        layers: l_max,
        last_increment,
        converged: false,
    })
}

fn check_square(adj: &DenseMatrix) -> Result<()> {
    if !adj.is_square() || adj.rows() == 0 {
        return Err(Error::Config("adjacency must be a non-empty square matrix".into()));
    }
    Ok(())
}

/// Lag-`k` SDD covariance `Sigma^(k)` reconstructed from motif contributions.
///
/// Requires `(1 - dt_tau) I + dt_tau eps A` to be stable. The result carries a
/// warning instead of failing when the truncation has not converged.
pub fn covariance_series(
    adj: &DenseMatrix,
    params: &MotifParams,
    k: u32,
    l_max: u32,
    tol: f64,
) -> Result<SeriesResult> {
    check_square(adj)?;
    let z = params.dt_tau;
    let n = adj.rows();
    let dynamics = DenseMatrix::identity(n)
        .scale(1.0 - z)
        .add(&adj.scale(z * params.eps));
    let rho = spectral_radius(&dynamics);
    if rho >= 1.0 {
        return Err(Error::Stability(format!(
            "lag-one dynamics has spectral radius {rho} >= 1"
        )));
    }
    // lag-0 contributions, filled one layer at a time
    let mut base: Vec<Vec<f64>> = Vec::new();
    let keep = 1.0 - z;
    let push = params.eps * z;
    let weights: Vec<f64> = (0..=k)
        .map(|j| binomial(k, j) * keep.powi((k - j) as i32) * push.powi(j as i32))
        .collect();
    sum_layers(adj, l_max, tol, |l_b, l_f| {
        let b = l_b as usize;
        while base.len() <= b {
            base.push(Vec::new());
        }
        while base[b].len() <= l_f as usize {
            let f = base[b].len() as u32;
            base[b].push(contribution_cov(l_b, f, params)?);
        }
        // c^(k)_{b,f} = sum_j binom(k, j) (1 - z)^(k - j) (eps z)^j c^(0)_{b, f - j}
        let mut c = 0.0;
        for j in 0..=k.min(l_f) {
            c += weights[j as usize] * base[b][(l_f - j) as usize];
        }
        Ok(c)
    })
}

/// OUP covariance from the motif series with
/// `c_{l_b,l_f} = tau sigma^2 eps^L binom(L, l_f) / (2^(L+1) n)`.
pub fn oup_covariance_series(
    adj: &DenseMatrix,
    eps: f64,
    tau: f64,
    sigma: f64,
    l_max: u32,
    tol: f64,
) -> Result<SeriesResult> {
    check_square(adj)?;
    let n = adj.rows();
    let rho = eps * spectral_radius(adj);
    if rho >= 1.0 {
        return Err(Error::Stability(format!("eps * rho(A) = {rho} >= 1")));
    }
    sum_layers(adj, l_max, tol, |l_b, l_f| {
        Ok(contribution_oup(l_b, l_f, eps, tau, sigma, n))
    })
}
