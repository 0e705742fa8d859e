//! `netinfer`: generate networks, simulate SDD dynamics, tabulate motif
//! contributions, infer networks with pairwise edge measures, and run
//! benchmark sweeps.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use netinfer::bench::{
    accuracy, bench_time, stream, sweep, threshold_pem, write_sweep_csv, write_timing_csv,
    SweepSpec, TimingSpec, TrialConfig, GRAPH_STREAM, NOISE_STREAM, SIMULATION_STREAM,
};
use netinfer::dynamics::{
    add_measurement_noise, parse_time_series, simulate_sdd, write_time_series, SddParams,
};
use netinfer::graphs::{
    generate_graph, graph_metrics, normalize_adjacency, parse_edge_list, write_edge_list,
    GraphConfig, GraphModel,
};
use netinfer::motifs::{contribution_table, write_contribution_table, MotifParams, MAX_TABLE_LENGTH};
use netinfer::pem::{compute_pem, write_pem_matrix, DtTau, PemKind};
use netinfer::{Error, ErrorKind, Result};

#[derive(Parser, Debug)]
#[command(name = "netinfer", version, about = "Network inference from time series with motif-corrected lagged correlations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw a ground-truth network and write it as an edge list.
    Generate(GenerateArgs),
    /// Simulate SDD dynamics on an edge list and write the time series.
    Simulate(SimulateArgs),
    /// Tabulate process-motif contributions as CSV.
    MotifTable(MotifTableArgs),
    /// Compute a PEM matrix from a time series and threshold it.
    Infer(InferArgs),
    /// Run a seeded parameter sweep and write per-trial CSV rows.
    Sweep(SweepArgs),
    /// Time PEM computations over node count, sample count and delta_hat.
    BenchTime(BenchTimeArgs),
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Graph model: gnm, er, ba, rr, sw or star
    #[arg(long, default_value = "gnm")]
    model: GraphModel,
    /// Number of nodes
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Edge density d_e
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// Edge reciprocity r_e
    #[arg(long, default_value_t = 0.5)]
    reciprocity: f64,
    /// Maximum edge transmission lag delta
    #[arg(long, default_value_t = 0)]
    delta: u32,
    /// Watts-Strogatz rewiring probability
    #[arg(long, default_value_t = netinfer::graphs::DEFAULT_REWIRING)]
    rewiring: f64,
    /// Hub degree K of shooting-star networks
    #[arg(long, default_value_t = 5)]
    hub_degree: usize,
}

impl GraphArgs {
    fn config(&self) -> GraphConfig {
        GraphConfig {
            model: self.model,
            n: self.n,
            density: self.density,
            reciprocity: self.reciprocity,
            max_lag: self.delta,
            rewiring: self.rewiring,
            hub_degree: self.hub_degree,
        }
    }
}

#[derive(Args, Debug)]
struct SddArgs {
    /// Coupling strength epsilon
    #[arg(long, default_value_t = 0.9)]
    eps: f64,
    /// Characteristic time tau
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    /// Sampling period dt
    #[arg(long, default_value_t = 0.5)]
    dt: f64,
    /// System-noise strength sigma
    #[arg(long, default_value_t = 0.2)]
    sigma: f64,
    /// Measurement-noise strength eta
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    /// Discarded simulation time [default: 20 tau]
    #[arg(long)]
    burn_in: Option<f64>,
}

impl SddArgs {
    fn params(&self, max_lag: u32, samples: usize) -> SddParams {
        SddParams {
            eps: self.eps,
            tau: self.tau,
            dt: self.dt,
            sigma: self.sigma,
            eta: self.eta,
            max_lag,
            samples,
            burn_in_time: self.burn_in,
        }
    }
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Random seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file [default: stdout]
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Edge-list file of the network
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    sdd: SddArgs,
    /// Number of recorded samples N
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Random seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file [default: stdout]
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MotifTableArgs {
    /// Comma-separated lags k
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    k_list: Vec<u32>,
    /// Largest motif length l_B + l_F
    #[arg(long, default_value_t = 4)]
    lmax: u32,
    /// Sampling period in units of tau
    #[arg(long, default_value_t = 0.5)]
    dt_tau: f64,
    /// Coupling strength epsilon
    #[arg(long, default_value_t = 0.9)]
    eps: f64,
    /// System-noise strength sigma
    #[arg(long, default_value_t = 0.2)]
    sigma: f64,
    /// Characteristic time tau
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    /// Number of nodes n
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Output file [default: stdout]
    #[arg(long, short)]
    out: Option<PathBuf>,
}

/// `auto` or a number in (0, 1].
#[derive(Clone, Copy, Debug)]
struct DtTauArg(DtTau);

impl FromStr for DtTauArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(DtTauArg(DtTau::Auto));
        }
        s.parse::<f64>()
            .map(|v| DtTauArg(DtTau::Fixed(v)))
            .map_err(|_| format!("expected 'auto' or a number, got '{s}'"))
    }
}

#[derive(Args, Debug)]
struct InferArgs {
    /// Time-series file
    #[arg(long, short)]
    input: PathBuf,
    /// PEM: lc, lccf, lcrc or gc
    #[arg(long, default_value = "lcrc")]
    pem: PemKind,
    /// dt_tau for LCCF/LCRC, or 'auto' to estimate it [default: dt / tau]
    #[arg(long)]
    dt_tau: Option<DtTauArg>,
    /// Characteristic time used when --dt-tau is absent
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    /// Assumed maximum lag; GC uses order delta_hat + 1
    #[arg(long, default_value_t = 0)]
    delta_hat: u32,
    /// Ground-truth edge list; enables the accuracy report [default: none]
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Number of edges to keep [default: edge count of --truth]
    #[arg(long)]
    edges: Option<usize>,
    /// PEM matrix output file [default: stdout]
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Thresholded edge-list output file [default: none]
    #[arg(long)]
    edges_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Graph models
    #[arg(long, value_delimiter = ',', default_value = "gnm")]
    models: Vec<GraphModel>,
    /// Node counts
    #[arg(long, value_delimiter = ',', default_value = "10")]
    n: Vec<usize>,
    /// Edge densities
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    density: Vec<f64>,
    /// Edge reciprocities
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    reciprocity: Vec<f64>,
    /// Maximum edge lags delta
    #[arg(long, value_delimiter = ',', default_value = "0")]
    delta: Vec<u32>,
    /// Assumed maximum lags delta_hat
    #[arg(long, value_delimiter = ',', default_value = "0")]
    delta_hat: Vec<u32>,
    /// Coupling strengths
    #[arg(long, value_delimiter = ',', default_value = "0.9")]
    eps: Vec<f64>,
    /// Characteristic times
    #[arg(long, value_delimiter = ',', default_value = "1")]
    tau: Vec<f64>,
    /// Sampling periods
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    dt: Vec<f64>,
    /// System-noise strengths
    #[arg(long, value_delimiter = ',', default_value = "0.2")]
    sigma: Vec<f64>,
    /// Measurement-noise strengths
    #[arg(long, value_delimiter = ',', default_value = "0")]
    eta: Vec<f64>,
    /// Sample counts N
    #[arg(long = "samples", value_delimiter = ',', default_value = "1000")]
    samples: Vec<usize>,
    /// Shooting-star hub degrees
    #[arg(long, value_delimiter = ',', default_value = "5")]
    hub_degree: Vec<usize>,
    /// Watts-Strogatz rewiring probability
    #[arg(long, default_value_t = netinfer::graphs::DEFAULT_REWIRING)]
    rewiring: f64,
    /// Discarded simulation time [default: 20 tau]
    #[arg(long)]
    burn_in: Option<f64>,
    /// Estimate dt_tau from the data instead of using dt / tau
    #[arg(long)]
    dt_tau_auto: bool,
    /// PEMs to score
    #[arg(long, value_delimiter = ',', default_value = "lcrc,lccf,lc")]
    pems: Vec<PemKind>,
    /// Trials per grid cell
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Master seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads [default: all cores]
    #[arg(long)]
    jobs: Option<usize>,
    /// Output CSV file [default: stdout]
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchTimeArgs {
    /// Node counts
    #[arg(long, value_delimiter = ',', default_value = "10")]
    n: Vec<usize>,
    /// Sample counts N
    #[arg(long = "samples", value_delimiter = ',', default_value = "1000")]
    samples: Vec<usize>,
    /// Assumed maximum lags delta_hat
    #[arg(long, value_delimiter = ',', default_value = "0")]
    delta_hat: Vec<u32>,
    /// PEMs to time
    #[arg(long, value_delimiter = ',', default_value = "lcrc,lccf,lc,gc")]
    pems: Vec<PemKind>,
    /// Trials per grid cell
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Master seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Graph model
    #[arg(long, default_value = "gnm")]
    model: GraphModel,
    /// Edge density d_e
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// Edge reciprocity r_e
    #[arg(long, default_value_t = 0.5)]
    reciprocity: f64,
    #[command(flatten)]
    sdd: SddArgs,
    /// Output CSV file [default: stdout]
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    eprintln!("netinfer config: {cli:#?}");
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Config => 2,
                ErrorKind::Data => 3,
                ErrorKind::Io => 4,
            })
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Generate(a) => cmd_generate(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::MotifTable(a) => cmd_motif_table(&a),
        Command::Infer(a) => cmd_infer(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::BenchTime(a) => cmd_bench_time(&a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    let wrap = |path: &Path, e: io::Error| {
        Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    };
    match out {
        Some(path) => fs::write(path, text).map_err(|e| wrap(path, e)),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(Error::Io),
    }
}

fn cmd_generate(a: &GenerateArgs) -> Result<()> {
    let config = a.graph.config();
    let g = generate_graph(&config, &mut stream(a.seed, GRAPH_STREAM))?;
    let metrics = graph_metrics(&g)?;
    eprintln!(
        "generated {} nodes, {} edges (density {:.4}, reciprocity {:.4})",
        g.node_count(),
        g.edge_count(),
        metrics.density,
        metrics.reciprocity
    );
    emit(a.out.as_deref(), &write_edge_list(&g))
}

fn cmd_simulate(a: &SimulateArgs) -> Result<()> {
    let name = a.graph.display().to_string();
    let g = parse_edge_list(&read(&a.graph)?, &name)?;
    let adj = normalize_adjacency(&g)?;
    let params = a.sdd.params(g.max_lag(), a.samples);
    if params.dt_tau_flagged() {
        eprintln!("warning: dt / tau = {} exceeds 1", params.dt_tau());
    }
    let clean = simulate_sdd(&adj, &params, &mut stream(a.seed, SIMULATION_STREAM))?;
    let ts = add_measurement_noise(&clean, params.eta, &mut stream(a.seed, NOISE_STREAM))?;
    emit(a.out.as_deref(), &write_time_series(&ts))
}

fn cmd_motif_table(a: &MotifTableArgs) -> Result<()> {
    if a.lmax > MAX_TABLE_LENGTH {
        return Err(Error::Config(format!(
            "--lmax must be at most {MAX_TABLE_LENGTH}, got {}",
            a.lmax
        )));
    }
    if !(a.dt_tau > 0.0 && a.dt_tau <= 1.0) {
        return Err(Error::Config(format!("--dt-tau must lie in (0, 1], got {}", a.dt_tau)));
    }
    if a.k_list.is_empty() {
        return Err(Error::Config("--k-list must name at least one lag".into()));
    }
    if a.n == 0 {
        return Err(Error::Config("--n must be positive".into()));
    }
    if !(a.tau > 0.0) {
        return Err(Error::Config(format!("--tau must be positive, got {}", a.tau)));
    }
    let params = MotifParams {
        eps: a.eps,
        tau: a.tau,
        sigma: a.sigma,
        n: a.n,
        dt_tau: a.dt_tau,
    };
    let rows = contribution_table(&a.k_list, a.lmax, &params)?;
    emit(a.out.as_deref(), &write_contribution_table(&rows))
}

fn cmd_infer(a: &InferArgs) -> Result<()> {
    let name = a.input.display().to_string();
    let ts = parse_time_series(&read(&a.input)?, &name)?;
    if !(a.tau > 0.0) {
        return Err(Error::Config(format!("--tau must be positive, got {}", a.tau)));
    }
    let dt_tau = a
        .dt_tau
        .map(|d| d.0)
        .unwrap_or(DtTau::Fixed(ts.dt() / a.tau));
    let truth = match &a.truth {
        Some(path) => {
            let g = parse_edge_list(&read(path)?, &path.display().to_string())?;
            if g.node_count() != ts.node_count() {
                return Err(Error::Config(format!(
                    "--truth has {} nodes but the time series has {}",
                    g.node_count(),
                    ts.node_count()
                )));
            }
            Some(g)
        }
        None => None,
    };
    let pem = compute_pem(&ts, a.pem, dt_tau, a.delta_hat)?;
    if pem.dt_tau_estimated {
        eprintln!(
            "estimated dt_tau = {}{}",
            pem.dt_tau.unwrap_or(f64::NAN),
            if pem.dt_tau_clamped { " (clamped)" } else { "" }
        );
    }
    if !pem.failed_pairs.is_empty() {
        eprintln!("warning: {} GC pairs were rank deficient and scored 0", pem.failed_pairs.len());
    }
    emit(a.out.as_deref(), &write_pem_matrix(&pem))?;

    let m = match (a.edges, &truth) {
        (Some(m), _) => Some(m),
        (None, Some(g)) => Some(g.edge_count()),
        (None, None) => None,
    };
    let Some(m) = m else {
        if a.edges_out.is_some() {
            return Err(Error::Config("--edges-out needs --edges or --truth".into()));
        }
        return Ok(());
    };
    let inferred = threshold_pem(&pem, m)?;
    if let Some(path) = &a.edges_out {
        emit(Some(path), &write_edge_list(&inferred))?;
    }
    if let Some(truth) = &truth {
        let phi = accuracy(&inferred, truth)?;
        if a.out.is_some() {
            println!("accuracy {phi}");
        } else {
            eprintln!("accuracy {phi}");
        }
    }
    Ok(())
}

fn cmd_sweep(a: &SweepArgs) -> Result<()> {
    let spec = SweepSpec {
        models: a.models.clone(),
        n: a.n.clone(),
        density: a.density.clone(),
        reciprocity: a.reciprocity.clone(),
        max_lag: a.delta.clone(),
        delta_hat: a.delta_hat.clone(),
        eps: a.eps.clone(),
        tau: a.tau.clone(),
        dt: a.dt.clone(),
        sigma: a.sigma.clone(),
        eta: a.eta.clone(),
        samples: a.samples.clone(),
        hub_degree: a.hub_degree.clone(),
        rewiring: a.rewiring,
        burn_in_time: a.burn_in,
        estimate_dt_tau: a.dt_tau_auto,
        trials: a.trials,
        master_seed: a.seed,
        pems: a.pems.clone(),
    };
    let rows = sweep(&spec, a.jobs)?;
    let failures = rows.iter().filter(|r| r.error.is_some()).count();
    if failures > 0 {
        eprintln!("warning: {failures} of {} rows record a failed trial", rows.len());
    }
    emit(a.out.as_deref(), &write_sweep_csv(&rows)?)
}

fn cmd_bench_time(a: &BenchTimeArgs) -> Result<()> {
    let spec = TimingSpec {
        base: TrialConfig {
            graph: GraphConfig {
                model: a.model,
                density: a.density,
                reciprocity: a.reciprocity,
                ..GraphConfig::default()
            },
            sdd: a.sdd.params(0, 1000),
            delta_hat: 0,
            estimate_dt_tau: false,
        },
        n: a.n.clone(),
        samples: a.samples.clone(),
        delta_hat: a.delta_hat.clone(),
        pems: a.pems.clone(),
        trials: a.trials,
        master_seed: a.seed,
    };
    let rows = bench_time(&spec)?;
    emit(a.out.as_deref(), &write_timing_csv(&rows)?)
}
