use rayon::prelude::*;

use super::{fmt_sig10, run_trial, trial_seed, TrialConfig};
use crate::dynamics::SddParams;
use crate::error::{Error, Result};
use crate::graphs::{GraphConfig, GraphModel, DEFAULT_REWIRING};
use crate::pem::PemKind;

pub const SWEEP_CSV_HEADER: &str =
    "model,n,d_e,r_e,delta,delta_hat,eps,tau,dt,sigma,eta,N,pem,trial,seed,accuracy,wall_time_s,error";

/// A parameter grid. Every list is one axis of the Cartesian product.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub models: Vec<GraphModel>,
    pub n: Vec<usize>,
    pub density: Vec<f64>,
    pub reciprocity: Vec<f64>,
    pub max_lag: Vec<u32>,
    pub delta_hat: Vec<u32>,
    pub eps: Vec<f64>,
    pub tau: Vec<f64>,
    pub dt: Vec<f64>,
    pub sigma: Vec<f64>,
    pub eta: Vec<f64>,
    pub samples: Vec<usize>,
    /// Shooting-star hub degrees; ignored by the other models.
    pub hub_degree: Vec<usize>,
    pub rewiring: f64,
    pub burn_in_time: Option<f64>,
    pub estimate_dt_tau: bool,
    pub trials: usize,
    pub master_seed: u64,
    pub pems: Vec<PemKind>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        let g = GraphConfig::default();
        let s = SddParams::default();
        SweepSpec {
            models: vec![g.model],
            n: vec![g.n],
            density: vec![g.density],
            reciprocity: vec![g.reciprocity],
            max_lag: vec![0],
            delta_hat: vec![0],
            eps: vec![s.eps],
            tau: vec![s.tau],
            dt: vec![s.dt],
            sigma: vec![s.sigma],
            eta: vec![s.eta],
            samples: vec![s.samples],
            hub_degree: vec![g.hub_degree],
            rewiring: DEFAULT_REWIRING,
            burn_in_time: None,
            estimate_dt_tau: false,
            trials: 1,
            master_seed: 0,
            pems: vec![PemKind::Lcrc, PemKind::Lccf, PemKind::Lc],
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let axes = [
            ("model", self.models.len()),
            ("n", self.n.len()),
            ("d_e", self.density.len()),
            ("r_e", self.reciprocity.len()),
            ("delta", self.max_lag.len()),
            ("delta_hat", self.delta_hat.len()),
            ("eps", self.eps.len()),
            ("tau", self.tau.len()),
            ("dt", self.dt.len()),
            ("sigma", self.sigma.len()),
            ("eta", self.eta.len()),
            ("N", self.samples.len()),
            ("hub degree", self.hub_degree.len()),
            ("pem", self.pems.len()),
        ];
        if let Some((name, _)) = axes.iter().find(|(_, len)| *len == 0) {
            return Err(Error::Config(format!("sweep grid for {name} is empty")));
        }
        if self.trials == 0 {
            return Err(Error::Config("sweep needs at least one trial per cell".into()));
        }
        Ok(())
    }

    /// Grid cells in canonical order: axes nested in CSV column order with
    /// the last axis (hub degree) varying fastest.
    pub fn cells(&self) -> Vec<TrialConfig> {
        let dims = [
            self.models.len(),
            self.n.len(),
            self.density.len(),
            self.reciprocity.len(),
            self.max_lag.len(),
            self.delta_hat.len(),
            self.eps.len(),
            self.tau.len(),
            self.dt.len(),
            self.sigma.len(),
            self.eta.len(),
            self.samples.len(),
            self.hub_degree.len(),
        ];
        let total: usize = dims.iter().product();
        (0..total)
            .map(|index| {
                let mut digit = [0usize; 13];
                let mut rest = index;
                for axis in (0..dims.len()).rev() {
                    digit[axis] = rest % dims[axis];
                    rest /= dims[axis];
                }
                let max_lag = self.max_lag[digit[4]];
                TrialConfig {
                    graph: GraphConfig {
                        model: self.models[digit[0]],
                        n: self.n[digit[1]],
                        density: self.density[digit[2]],
                        reciprocity: self.reciprocity[digit[3]],
                        max_lag,
                        rewiring: self.rewiring,
                        hub_degree: self.hub_degree[digit[12]],
                    },
                    sdd: SddParams {
                        eps: self.eps[digit[6]],
                        tau: self.tau[digit[7]],
                        dt: self.dt[digit[8]],
                        sigma: self.sigma[digit[9]],
                        eta: self.eta[digit[10]],
                        max_lag,
                        samples: self.samples[digit[11]],
                        burn_in_time: self.burn_in_time,
                    },
                    delta_hat: self.delta_hat[digit[5]],
                    estimate_dt_tau: self.estimate_dt_tau,
                }
            })
            .collect()
    }
}

/// One CSV row: a PEM in one trial, or the failure of that trial.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub cell: usize,
    pub trial: usize,
    pub seed: u64,
    pub config: TrialConfig,
    pub pem: PemKind,
    pub accuracy: Option<f64>,
    pub wall_time_s: Option<f64>,
    pub error: Option<String>,
}

/// Runs every trial of every cell. Trial `t` of cell `c` uses
/// `trial_seed(master_seed, c, t)`, so rows do not depend on scheduling.
/// `jobs` caps the worker threads (`None` uses the global pool). A failing
/// trial yields one row per PEM carrying the error message.
pub fn sweep(spec: &SweepSpec, jobs: Option<usize>) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let cells = spec.cells();
    let work: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..spec.trials).map(move |t| (c, t)))
        .collect();
    let run = || -> Vec<Vec<SweepRow>> {
        work.par_iter()
            .map(|&(c, t)| {
                let config = &cells[c];
                let seed = trial_seed(spec.master_seed, c as u64, t as u64);
                let row = |pem, accuracy, wall_time_s, error| SweepRow {
                    cell: c,
                    trial: t,
                    seed,
                    config: config.clone(),
                    pem,
                    accuracy,
                    wall_time_s,
                    error,
                };
                match run_trial(config, &spec.pems, seed) {
                    Ok(records) => records
                        .into_iter()
                        .map(|r| row(r.pem, Some(r.accuracy), Some(r.wall_time_s), None))
                        .collect(),
                    Err(e) => spec
                        .pems
                        .iter()
                        .map(|&p| row(p, None, None, Some(e.to_string())))
                        .collect(),
                }
            })
            .collect()
    };
    let nested = match jobs {
        Some(0) => return Err(Error::Config("--jobs must be at least 1".into())),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {j} worker threads: {e}")))?
            .install(run),
        None => run(),
    };
    Ok(nested.into_iter().flatten().collect())
}

/// Sweep rows as CSV under [`SWEEP_CSV_HEADER`], floats to 10 significant
/// digits, empty cells for missing values.
pub fn write_sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_CSV_HEADER.split(','))
        .map_err(csv_error)?;
    for r in rows {
        let g = &r.config.graph;
        let s = &r.config.sdd;
        let opt = |v: Option<f64>| v.map(fmt_sig10).unwrap_or_default();
        w.write_record([
            g.model.to_string(),
            g.n.to_string(),
            fmt_sig10(g.density),
            fmt_sig10(g.reciprocity),
            g.max_lag.to_string(),
            r.config.delta_hat.to_string(),
            fmt_sig10(s.eps),
            fmt_sig10(s.tau),
            fmt_sig10(s.dt),
            fmt_sig10(s.sigma),
            fmt_sig10(s.eta),
            s.samples.to_string(),
            r.pem.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            opt(r.accuracy),
            opt(r.wall_time_s),
            r.error.clone().unwrap_or_default(),
        ])
        .map_err(csv_error)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(std::io::Error::other(e)))
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
