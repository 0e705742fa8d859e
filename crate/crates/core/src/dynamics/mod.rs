//! Stochastic delay-difference (SDD) simulation and measurement noise.

mod series;

pub use series::{parse_time_series, write_time_series, TimeSeries};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::graphs::NormalizedAdjacency;
use crate::numerics::{spectral_radius, DenseMatrix};

/// Burn-in length in units of `tau` when none is given.
pub const DEFAULT_BURN_IN_TAUS: f64 = 20.0;

/// Parameters of the SDD model and of the sampling.
#[derive(Clone, Debug, PartialEq)]
pub struct SddParams {
    /// Coupling strength `epsilon`.
    pub eps: f64,
    /// Characteristic time `tau`.
    pub tau: f64,
    /// Sampling period.
    pub dt: f64,
    /// System-noise strength.
    pub sigma: f64,
    /// Measurement-noise strength.
    pub eta: f64,
    /// Largest edge lag `delta`; the model has order `delta + 1`.
    pub max_lag: u32,
    /// Number of retained samples `N`.
    pub samples: usize,
    /// Simulated time discarded before recording; `None` means `20 tau`.
    pub burn_in_time: Option<f64>,
}

impl Default for SddParams {
    fn default() -> Self {
        SddParams {
            eps: 0.9,
            tau: 1.0,
            dt: 0.5,
            sigma: 0.2,
            eta: 0.0,
            max_lag: 0,
            samples: 1000,
            burn_in_time: None,
        }
    }
}

impl SddParams {
    /// `dt_tau = dt / tau`.
    pub fn dt_tau(&self) -> f64 {
        self.dt / self.tau
    }

    /// True when `dt_tau > 1`, outside the regime the model interpolates.
    pub fn dt_tau_flagged(&self) -> bool {
        self.dt_tau() > 1.0
    }

    pub fn burn_in_steps(&self) -> usize {
        let time = self.burn_in_time.unwrap_or(DEFAULT_BURN_IN_TAUS * self.tau);
        (time / self.dt).ceil() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        let non_negative = |name: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be non-negative, got {v}")))
            }
        };
        positive("tau", self.tau)?;
        positive("dt", self.dt)?;
        non_negative("eps", self.eps)?;
        non_negative("sigma", self.sigma)?;
        non_negative("eta", self.eta)?;
        if let Some(b) = self.burn_in_time {
            non_negative("burn-in time", b)?;
        }
        if self.samples < 2 {
            return Err(Error::Config(format!(
                "need at least 2 samples, got {}",
                self.samples
            )));
        }
        Ok(())
    }
}

/// Lag-one dynamics `K = (1 - dt_tau) I + dt_tau eps A`.
pub fn lag_one_matrix(adj: &DenseMatrix, eps: f64, dt_tau: f64) -> DenseMatrix {
    DenseMatrix::identity(adj.rows())
        .scale(1.0 - dt_tau)
        .add(&adj.scale(dt_tau * eps))
}

/// Companion form of the order-`p` recursion, acting on the stacked state
/// `(x_t, x_{t-1}, ..., x_{t-p+1})`.
pub fn companion_matrix(adj: &NormalizedAdjacency, eps: f64, dt_tau: f64) -> DenseMatrix {
    let n = adj.node_count();
    let p = adj.per_lag.len();
    let mut c = DenseMatrix::zeros(n * p, n * p);
    for (k, a) in adj.per_lag.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                c[(i, k * n + j)] = dt_tau * eps * a[(i, j)];
            }
        }
    }
    for i in 0..n {
        c[(i, i)] += 1.0 - dt_tau;
    }
    for r in n..n * p {
        c[(r, r - n)] = 1.0;
    }
    c
}

/// Spectral radius of the simulated recursion: of `K` for order 1, of the
/// companion matrix otherwise.
pub fn dynamics_radius(adj: &NormalizedAdjacency, eps: f64, dt_tau: f64) -> f64 {
    if adj.per_lag.len() == 1 {
        spectral_radius(&lag_one_matrix(&adj.total, eps, dt_tau))
    } else {
        spectral_radius(&companion_matrix(adj, eps, dt_tau))
    }
}

/// Simulates
/// `x_t = (1 - dt_tau) x_{t-1} + dt_tau eps sum_k A^(k) x_{t-k} + sigma dw_t`
/// from a zero history, with independent `dw ~ N(0, dt / n)` per component.
/// The first `burn_in_steps()` states are discarded and the next `samples`
/// returned.
pub fn simulate_sdd<R: Rng + ?Sized>(
    adj: &NormalizedAdjacency,
    params: &SddParams,
    rng: &mut R,
) -> Result<TimeSeries> {
    params.validate()?;
    if adj.max_lag() > params.max_lag as usize {
        return Err(Error::Config(format!(
            "graph has lag {} but the model allows at most {}",
            adj.max_lag(),
            params.max_lag
        )));
    }
    let n = adj.node_count();
    let z = params.dt_tau();
    let rho = dynamics_radius(adj, params.eps, z);
    if rho >= 1.0 {
        return Err(Error::Stability(format!(
            "spectral radius of the SDD recursion is {rho} >= 1"
        )));
    }

    // (target, source, weight) per lag
    let couplings: Vec<Vec<(usize, usize, f64)>> = adj
        .per_lag
        .iter()
        .map(|a| {
            let mut list = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if a[(i, j)] != 0.0 {
                        list.push((i, j, z * params.eps * a[(i, j)]));
                    }
                }
            }
            list
        })
        .collect();
    let order = couplings.len();
    let keep = 1.0 - z;
    let noise_sd = params.sigma * (params.dt / n as f64).sqrt();

    let burn = params.burn_in_steps();
    let mut history = vec![vec![0.0; n]; order];
    // history[head] is x_{t-1}, history[(head + order - k) % order] is x_{t-1-k}
    let mut head = 0usize;
    let mut next = vec![0.0; n];
    let mut values = Vec::with_capacity(params.samples * n);
    for step in 0..burn + params.samples {
        let last = &history[head];
        for i in 0..n {
            next[i] = keep * last[i];
        }
        for (k, list) in couplings.iter().enumerate() {
            let past = &history[(head + order - k) % order];
            for &(i, j, w) in list {
                next[i] += w * past[j];
            }
        }
        for v in next.iter_mut() {
            let xi: f64 = StandardNormal.sample(rng);
            *v += noise_sd * xi;
        }
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("state overflowed at step {step}")));
        }
        head = (head + 1) % order;
        history[head].copy_from_slice(&next);
        if step >= burn {
            values.extend_from_slice(&next);
        }
    }
    TimeSeries::new(n, params.dt, values)
}

/// Adds independent `N(0, eta^2 dt / n)` noise to every observation.
pub fn add_measurement_noise<R: Rng + ?Sized>(
    ts: &TimeSeries,
    eta: f64,
    rng: &mut R,
) -> Result<TimeSeries> {
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::Config(format!("eta must be non-negative, got {eta}")));
    }
    if eta == 0.0 {
        return Ok(ts.clone());
    }
    let sd = eta * (ts.dt() / ts.node_count() as f64).sqrt();
    let values = ts
        .values()
        .iter()
        .map(|v| {
            let e: f64 = StandardNormal.sample(rng);
            v + sd * e
        })
        .collect();
    TimeSeries::new(ts.node_count(), ts.dt(), values)
}
