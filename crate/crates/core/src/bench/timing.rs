use super::sweep::csv_error;
use super::{fmt_sig10, run_trial, trial_seed, TrialConfig};
use crate::error::{Error, Result};
use crate::pem::PemKind;

pub const TIMING_CSV_HEADER: &str = "n,N,delta_hat,pem,trial,seed,wall_time_s";

/// Timing grid over node count, sample count and `delta_hat`. Data come from
/// `base` with those three values substituted.
#[derive(Clone, Debug, PartialEq)]
pub struct TimingSpec {
    pub base: TrialConfig,
    pub n: Vec<usize>,
    pub samples: Vec<usize>,
    pub delta_hat: Vec<u32>,
    pub pems: Vec<PemKind>,
    pub trials: usize,
    pub master_seed: u64,
}

impl Default for TimingSpec {
    fn default() -> Self {
        TimingSpec {
            base: TrialConfig::default(),
            n: vec![10],
            samples: vec![1000],
            delta_hat: vec![0],
            pems: PemKind::ALL.to_vec(),
            trials: 10,
            master_seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimingRow {
    pub n: usize,
    pub samples: usize,
    pub delta_hat: u32,
    pub pem: PemKind,
    pub trial: usize,
    pub seed: u64,
    pub wall_time_s: f64,
}

/// Times each PEM on freshly simulated data. Trials run one after another on
/// the calling thread so that measurements do not compete for cores.
pub fn bench_time(spec: &TimingSpec) -> Result<Vec<TimingRow>> {
    if spec.n.is_empty() || spec.samples.is_empty() || spec.delta_hat.is_empty() || spec.pems.is_empty() {
        return Err(Error::Config("timing grid has an empty axis".into()));
    }
    if spec.trials == 0 {
        return Err(Error::Config("timing needs at least one trial per cell".into()));
    }
    let mut rows = Vec::new();
    let mut cell = 0u64;
    for &n in &spec.n {
        for &samples in &spec.samples {
            for &delta_hat in &spec.delta_hat {
                let mut config = spec.base.clone();
                config.graph.n = n;
                config.sdd.samples = samples;
                config.delta_hat = delta_hat;
                for trial in 0..spec.trials {
                    let seed = trial_seed(spec.master_seed, cell, trial as u64);
                    for rec in run_trial(&config, &spec.pems, seed)? {
                        rows.push(TimingRow {
                            n,
                            samples,
                            delta_hat,
                            pem: rec.pem,
                            trial,
                            seed,
                            wall_time_s: rec.wall_time_s,
                        });
                    }
                }
                cell += 1;
            }
        }
    }
    Ok(rows)
}

pub fn write_timing_csv(rows: &[TimingRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TIMING_CSV_HEADER.split(',')).map_err(csv_error)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.samples.to_string(),
            r.delta_hat.to_string(),
            r.pem.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            fmt_sig10(r.wall_time_s),
        ])
        .map_err(csv_error)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(std::io::Error::other(e)))
}
