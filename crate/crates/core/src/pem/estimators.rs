use crate::dynamics::TimeSeries;
use crate::error::{Error, Result};
use crate::numerics::DenseMatrix;

// a variance this small relative to the node's magnitude is centering round-off
const ZERO_VARIANCE_REL: f64 = 64.0 * f64::EPSILON;

/// Centered per-node columns, reused across lags.
pub(crate) struct LaggedStats {
    centered: Vec<Vec<f64>>,
    scale: Vec<f64>,
    len: usize,
}

impl LaggedStats {
    pub(crate) fn new(ts: &TimeSeries) -> Self {
        let len = ts.len();
        let mut centered = Vec::with_capacity(ts.node_count());
        let mut scale = Vec::with_capacity(ts.node_count());
        for node in 0..ts.node_count() {
            let mut col = ts.column(node);
            let mean = col.iter().sum::<f64>() / len as f64;
            scale.push(col.iter().fold(0.0_f64, |m, v| m.max(v.abs())));
            col.iter_mut().for_each(|v| *v -= mean);
            centered.push(col);
        }
        LaggedStats {
            centered,
            scale,
            len,
        }
    }

    pub(crate) fn node_count(&self) -> usize {
        self.centered.len()
    }

    fn check_lag(&self, k: usize) -> Result<()> {
        if k + 2 > self.len {
            return Err(Error::InsufficientData(format!(
                "lag {k} needs at least {} samples, have {}",
                k + 2,
                self.len
            )));
        }
        Ok(())
    }

    fn entry(&self, i: usize, j: usize, k: usize) -> f64 {
        let a = &self.centered[i][k..];
        let b = &self.centered[j][..self.len - k];
        a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / (self.len - k - 1) as f64
    }

    pub(crate) fn cov(&self, k: usize) -> Result<DenseMatrix> {
        self.check_lag(k)?;
        let n = self.node_count();
        if k == 0 {
            let mut s = DenseMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..=i {
                    let v = self.entry(i, j, 0);
                    s[(i, j)] = v;
                    s[(j, i)] = v;
                }
            }
            return Ok(s);
        }
        Ok(DenseMatrix::from_fn(n, n, |i, j| self.entry(i, j, k)))
    }

    /// Lag-0 standard deviations, failing on a node without variance.
    pub(crate) fn std_devs(&self) -> Result<Vec<f64>> {
        self.check_lag(0)?;
        (0..self.node_count())
            .map(|i| {
                let var = self.entry(i, i, 0);
                let floor = ZERO_VARIANCE_REL * self.scale[i];
                if !(var > floor * floor) {
                    return Err(Error::ZeroVariance { node: i });
                }
                Ok(var.sqrt())
            })
            .collect()
    }

    pub(crate) fn corr(&self, k: usize, sd: &[f64]) -> Result<DenseMatrix> {
        let mut r = self.cov(k)?;
        let n = self.node_count();
        for i in 0..n {
            for j in 0..n {
                r[(i, j)] /= sd[i] * sd[j];
            }
        }
        if k == 0 {
            for i in 0..n {
                r[(i, i)] = 1.0;
            }
        }
        Ok(r)
    }
}

/// Lag-`k` sample covariance
/// `S_ij = 1/(N-k-1) sum_t (x_{i,t+k} - mean_i)(x_{j,t} - mean_j)`.
pub fn sample_lagged_cov(ts: &TimeSeries, k: usize) -> Result<DenseMatrix> {
    LaggedStats::new(ts).cov(k)
}

/// Lag-`k` sample correlation `S^(k)_ij / sqrt(S^(0)_ii S^(0)_jj)`.
pub fn sample_lagged_corr(ts: &TimeSeries, k: usize) -> Result<DenseMatrix> {
    let stats = LaggedStats::new(ts);
    let sd = stats.std_devs()?;
    stats.corr(k, &sd)
}

/// Result of the characteristic-time estimator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauEstimate {
    /// Estimated `1 / tau`.
    pub tau_inv: f64,
    /// `dt * tau_inv`, clamped into `(0, 1]`.
    pub dt_tau: f64,
    /// Whether clamping changed the implied `dt_tau`.
    pub clamped: bool,
}

/// Lower clamp for an implied `dt_tau` that came out non-positive.
pub const DT_TAU_FLOOR: f64 = 1e-6;

/// Estimates `1/tau` as `(1 - median_i M_ii) / dt` with `M = S^(1) (S^(0))^-1`.
pub fn estimate_tau_inv(ts: &TimeSeries) -> Result<TauEstimate> {
    let n = ts.node_count();
    if ts.len() < n + 2 {
        return Err(Error::InsufficientData(format!(
            "tau estimation needs at least {} samples, have {}",
            n + 2,
            ts.len()
        )));
    }
    let stats = LaggedStats::new(ts);
    stats.std_devs()?;
    tau_inv_from_covariances(&stats.cov(0)?, &stats.cov(1)?, ts.dt())
}

/// The estimator applied to given lag-0 and lag-1 covariances.
pub fn tau_inv_from_covariances(
    s0: &DenseMatrix,
    s1: &DenseMatrix,
    dt: f64,
) -> Result<TauEstimate> {
    let inv = s0
        .inverse()
        .map_err(|_| Error::Degenerate("lag-0 covariance is singular".into()))?;
    let m = s1.matmul(&inv);
    let mut diag: Vec<f64> = (0..m.rows()).map(|i| m[(i, i)]).collect();
    if diag.iter().any(|v| !v.is_finite()) {
        return Err(Error::Degenerate("lag-0 covariance is ill-conditioned".into()));
    }
    diag.sort_by(f64::total_cmp);
    let h = diag.len() / 2;
    let median = if diag.len() % 2 == 1 {
        diag[h]
    } else {
        0.5 * (diag[h - 1] + diag[h])
    };
    let raw = 1.0 - median;
    let dt_tau = raw.clamp(DT_TAU_FLOOR, 1.0);
    Ok(TauEstimate {
        tau_inv: raw / dt,
        dt_tau,
        clamped: dt_tau != raw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{lag_one_matrix, simulate_sdd, SddParams};
    use crate::graphs::{normalize_adjacency, DirectedGraph, NormalizedAdjacency};
    use crate::numerics::solve_discrete_lyapunov;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn white(n: usize, len: usize, seed: u64) -> TimeSeries {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..n * len)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        TimeSeries::new(n, 1.0, values).unwrap()
    }

    fn empty(n: usize) -> NormalizedAdjacency {
        NormalizedAdjacency {
            total: DenseMatrix::zeros(n, n),
            per_lag: vec![DenseMatrix::zeros(n, n)],
            spectral_radius: 0.0,
        }
    }

    fn ring(n: usize) -> NormalizedAdjacency {
        let mut g = DirectedGraph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n, 0).unwrap();
        }
        normalize_adjacency(&g).unwrap()
    }

    #[test]
    fn constant_series_has_zero_covariance() {
        let ts = TimeSeries::new(2, 1.0, vec![0.1, 3.0, 0.1, 3.0, 0.1, 3.0]).unwrap();
        let s = sample_lagged_cov(&ts, 0).unwrap();
        assert!(s.max_abs() < 1e-30);
        assert!(matches!(
            sample_lagged_corr(&ts, 0),
            Err(Error::ZeroVariance { node: 0 })
        ));
    }

    #[test]
    fn hand_computed_lag_one() {
        // x = (1, 2, 4), mean 7/3; y = (0, 1, -1), mean 0
        let ts = TimeSeries::new(2, 1.0, vec![1.0, 0.0, 2.0, 1.0, 4.0, -1.0]).unwrap();
        let s1 = sample_lagged_cov(&ts, 1).unwrap();
        let xc = [1.0 - 7.0 / 3.0, 2.0 - 7.0 / 3.0, 4.0 - 7.0 / 3.0];
        let yc = [0.0, 1.0, -1.0];
        assert!((s1[(0, 1)] - (xc[1] * yc[0] + xc[2] * yc[1])).abs() < 1e-15);
        assert!((s1[(1, 0)] - (yc[1] * xc[0] + yc[2] * xc[1])).abs() < 1e-15);
        assert!(matches!(
            sample_lagged_cov(&ts, 2),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn iid_noise_is_identity() {
        let ts = white(3, 100_000, 1);
        let s = sample_lagged_cov(&ts, 0).unwrap();
        let bound = 4.0 / (ts.len() as f64).sqrt();
        assert!(s.is_symmetric(0.0));
        assert!(s.sub(&DenseMatrix::identity(3)).max_abs() < bound);
    }

    #[test]
    fn correlation_unit_diagonal_and_symmetric() {
        let ts = white(4, 50, 2);
        let r = sample_lagged_corr(&ts, 0).unwrap();
        for i in 0..4 {
            assert_eq!(r[(i, i)], 1.0);
        }
        assert!(r.is_symmetric(0.0));
    }

    #[test]
    fn ar1_autocorrelation() {
        let params = SddParams {
            samples: 50_000,
            ..SddParams::default()
        };
        let ts = simulate_sdd(&empty(2), &params, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let r1 = sample_lagged_corr(&ts, 1).unwrap();
        let bound = 4.0 / (ts.len() as f64).sqrt();
        assert!((r1[(0, 0)] - 0.5).abs() < bound);
        assert!((r1[(1, 1)] - 0.5).abs() < bound);
    }

    #[test]
    fn ring_lag_one_is_k_times_lag_zero() {
        let params = SddParams {
            samples: 200_000,
            ..SddParams::default()
        };
        let adj = ring(3);
        let ts = simulate_sdd(&adj, &params, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        let k = lag_one_matrix(&adj.total, params.eps, params.dt_tau());
        let s0 = sample_lagged_cov(&ts, 0).unwrap();
        let s1 = sample_lagged_cov(&ts, 1).unwrap();
        let predicted = k.matmul(&s0);
        let largest = predicted.max_abs();
        for i in 0..3 {
            for j in 0..3 {
                if predicted[(i, j)].abs() > 0.5 * largest {
                    let rel = (s1[(i, j)] - predicted[(i, j)]).abs() / predicted[(i, j)].abs();
                    assert!(rel < 0.05, "({i},{j}) rel {rel}");
                }
            }
        }
    }

    #[test]
    fn tau_estimator_exact_inputs() {
        let adj = ring(4);
        for (dt_tau, tau) in [(0.5, 1.0), (0.2, 2.0), (1.0, 0.5)] {
            let k = lag_one_matrix(&adj.total, 0.9, dt_tau);
            let q = DenseMatrix::identity(4).scale(0.01);
            let s0 = solve_discrete_lyapunov(&k, &q).unwrap();
            let s1 = k.matmul(&s0);
            let dt = dt_tau * tau;
            let est = tau_inv_from_covariances(&s0, &s1, dt).unwrap();
            assert!((est.tau_inv - 1.0 / tau).abs() < 1e-10);
            assert!((est.dt_tau - dt_tau).abs() < 1e-10);
            assert!(!est.clamped || dt_tau == 1.0);
        }
    }

    #[test]
    fn tau_estimator_monte_carlo() {
        for (tau, eps, adj) in [(1.0, 0.0, empty(5)), (2.0, 0.9, ring(5))] {
            let params = SddParams {
                tau,
                eps,
                samples: 10_000,
                ..SddParams::default()
            };
            let ts = simulate_sdd(&adj, &params, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
            let est = estimate_tau_inv(&ts).unwrap();
            assert!((est.tau_inv * tau - 1.0).abs() < 0.1, "tau {tau}: {est:?}");
        }
    }

    #[test]
    fn tau_estimator_clamps() {
        // M_ii = 1.2 gives a negative implied dt_tau
        let s0 = DenseMatrix::identity(2);
        let s1 = DenseMatrix::identity(2).scale(1.2);
        let est = tau_inv_from_covariances(&s0, &s1, 0.5).unwrap();
        assert!(est.clamped);
        assert_eq!(est.dt_tau, DT_TAU_FLOOR);
        assert!(est.tau_inv < 0.0);
        let singular = DenseMatrix::zeros(2, 2);
        assert!(matches!(
            tau_inv_from_covariances(&singular, &s1, 0.5),
            Err(Error::Degenerate(_))
        ));
    }
}
