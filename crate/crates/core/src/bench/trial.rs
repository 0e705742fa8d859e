use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{accuracy, splitmix64, threshold_pem};
use crate::dynamics::{add_measurement_noise, simulate_sdd, SddParams};
use crate::error::{Error, Result, Stage};
use crate::graphs::{generate_graph, normalize_adjacency, DirectedGraph, GraphConfig};
use crate::pem::{compute_pem, DtTau, PemKind};

/// Everything that defines one benchmark trial apart from its seed.
#[derive(Clone, Debug, PartialEq)]
#[derive(Default)]
pub struct TrialConfig {
    pub graph: GraphConfig,
    /// Simulation parameters; `max_lag` is taken from `graph.max_lag`.
    pub sdd: SddParams,
    /// Assumed maximum lag for LCCF/LCRC; GC uses order `delta_hat + 1`.
    pub delta_hat: u32,
    /// Estimate `dt_tau` from the data instead of using `dt / tau`.
    pub estimate_dt_tau: bool,
}


#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TrialFlags {
    pub dt_tau_clamped: bool,
    pub gc_failed_pairs: usize,
}

/// Result of one PEM within a trial.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub config: TrialConfig,
    pub pem: PemKind,
    pub seed: u64,
    pub accuracy: f64,
    /// Time spent computing the PEM matrix, in seconds.
    pub wall_time_s: f64,
    pub flags: TrialFlags,
}

pub const GRAPH_STREAM: u64 = 0;
pub const SIMULATION_STREAM: u64 = 1;
pub const NOISE_STREAM: u64 = 2;

/// Independent generator for one stage of the trial with this seed.
pub fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(splitmix64(seed) ^ id))
}

/// The ground-truth network of the trial with this seed.
pub fn trial_graph(config: &GraphConfig, seed: u64) -> Result<DirectedGraph> {
    generate_graph(config, &mut stream(seed, GRAPH_STREAM))
}

/// Draws a network, simulates it, adds measurement noise, then computes,
/// thresholds (with the true edge count) and scores each PEM in `pems`.
/// Only the wall time depends on anything other than `(config, pems, seed)`.
pub fn run_trial(config: &TrialConfig, pems: &[PemKind], seed: u64) -> Result<Vec<TrialRecord>> {
    let truth = trial_graph(&config.graph, seed).map_err(Error::at(Stage::Generate))?;
    let adj = normalize_adjacency(&truth).map_err(Error::at(Stage::Normalize))?;
    let sdd = SddParams {
        max_lag: config.graph.max_lag,
        ..config.sdd.clone()
    };
    let clean = simulate_sdd(&adj, &sdd, &mut stream(seed, SIMULATION_STREAM))
        .map_err(Error::at(Stage::Simulate))?;
    let ts = add_measurement_noise(&clean, sdd.eta, &mut stream(seed, NOISE_STREAM))
        .map_err(Error::at(Stage::Noise))?;
    let dt_tau = if config.estimate_dt_tau {
        DtTau::Auto
    } else {
        DtTau::Fixed(sdd.dt_tau())
    };

    let m = truth.edge_count();
    let mut records = Vec::with_capacity(pems.len());
    for &kind in pems {
        let start = Instant::now();
        let pem = compute_pem(&ts, kind, dt_tau, config.delta_hat);
        let wall_time_s = start.elapsed().as_secs_f64();
        let pem = pem.map_err(Error::at(Stage::Infer))?;
        let inferred = threshold_pem(&pem, m).map_err(Error::at(Stage::Threshold))?;
        let acc = accuracy(&inferred, &truth).map_err(Error::at(Stage::Score))?;
        records.push(TrialRecord {
            config: config.clone(),
            pem: kind,
            seed,
            accuracy: acc,
            wall_time_s,
            flags: TrialFlags {
                dt_tau_clamped: pem.dt_tau_clamped,
                gc_failed_pairs: pem.failed_pairs.len(),
            },
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_accuracy() {
        let cfg = TrialConfig::default();
        let pems = [PemKind::Lcrc, PemKind::Lccf, PemKind::Lc, PemKind::Gc];
        let a = run_trial(&cfg, &pems, 42).unwrap();
        let b = run_trial(&cfg, &pems, 42).unwrap();
        assert_eq!(a.len(), 4);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.accuracy, y.accuracy);
            assert_eq!(x.pem, y.pem);
            assert!((0.0..=1.0).contains(&x.accuracy));
            assert!(x.wall_time_s >= 0.0);
        }
        let c = run_trial(&cfg, &pems, 43).unwrap();
        assert!(a.iter().zip(&c).any(|(x, y)| x.accuracy != y.accuracy));
    }

    #[test]
    fn silent_system_is_degenerate() {
        let cfg = TrialConfig {
            sdd: SddParams {
                sigma: 0.0,
                eps: 0.0,
                ..SddParams::default()
            },
            ..TrialConfig::default()
        };
        let err = run_trial(&cfg, &[PemKind::Lc], 1).unwrap_err();
        match err {
            Error::Stage { stage, source } => {
                assert_eq!(stage, Stage::Infer);
                assert!(matches!(*source, Error::ZeroVariance { .. }));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn config_errors_name_the_stage() {
        let cfg = TrialConfig {
            graph: GraphConfig {
                n: 1,
                ..GraphConfig::default()
            },
            ..TrialConfig::default()
        };
        let err = run_trial(&cfg, &[PemKind::Lc], 1).unwrap_err();
        assert!(err.to_string().starts_with("generate:"));
        assert_eq!(err.kind(), crate::error::ErrorKind::Config);
    }

    #[test]
    fn graph_matches_trial() {
        let cfg = TrialConfig::default();
        let g = trial_graph(&cfg.graph, 7).unwrap();
        assert_eq!(g, trial_graph(&cfg.graph, 7).unwrap());
        assert_eq!(g.edge_count(), 45);
    }
}
