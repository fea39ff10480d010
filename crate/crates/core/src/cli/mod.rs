//! The `kuramoto` command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid arguments or input,
//! 3 no connected graph within the attempt budget, 4 numerical blowup,
//! 5 incomplete sweep, 6 no transition window for the `K_c` estimate.

pub mod config;
pub mod plot;
pub mod svg;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::integrate::{run_observed, Scheme, SimConfig, TraceWriter};
use crate::model::{init_ensemble, CouplingForm, CouplingSpec, EnsembleSpec, PhaseInit};
use crate::net::{connectivity_threshold, gen_connected, gen_er, Graph, DEFAULT_MAX_ATTEMPTS};
use crate::numfmt::g9;
use crate::sampling::{replicate_label, RngStream, DEFAULT_SEED, LABEL_FREQUENCIES, LABEL_PHASES, LABEL_TOPOLOGY};
use crate::sweep::{estimate_kc, run_sweep, PSelector, ResultTable};

use plot::FigureKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REJECTION: i32 = 3;
pub const EXIT_BLOWUP: i32 = 4;
pub const EXIT_INCOMPLETE: i32 = 5;
pub const EXIT_NO_TRANSITION: i32 = 6;

pub const WORKERS_ENV: &str = "KURAMOTO_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "kuramoto", version, about = "Kuramoto oscillators on Erdős–Rényi networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a single simulation and print the tail-averaged order parameter.
    Simulate(Box<SimulateArgs>),
    /// Run a (N, p, K, replicate) sweep and write results.csv.
    Sweep(Box<SweepArgs>),
    /// Estimate the critical coupling from a results CSV.
    Kc(KcArgs),
    /// Draw an SVG figure from a results CSV.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Number of oscillators.
    #[arg(long)]
    n: usize,
    /// Edge probability; graphs with p < 1 are redrawn until connected.
    #[arg(long, conflicts_with_all = ["threshold", "graph"])]
    p: Option<f64>,
    /// Use p = ln N / N.
    #[arg(long)]
    threshold: bool,
    /// Load the network from an edge-list file instead of sampling it.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Coupling constant K.
    #[arg(long)]
    k: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value = "rk4")]
    scheme: String,
    #[arg(long, default_value_t = 0.1)]
    dt: f64,
    #[arg(long, default_value_t = 5000)]
    steps: usize,
    #[arg(long, default_value_t = 1000)]
    tail: usize,
    #[arg(long, default_value = "network")]
    coupling_form: String,
    #[arg(long, default_value_t = 0.0)]
    freq_mean: f64,
    #[arg(long, default_value_t = 0.1)]
    freq_sigma: f64,
    #[arg(long, default_value = "uniform")]
    init_phases: String,
    #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
    max_attempts: usize,
    /// Write `step,t,R,psi` for every step.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the network as an edge list.
    #[arg(long)]
    graph_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// `key = value` config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// desk | paper
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Comma-separated network sizes.
    #[arg(long)]
    sizes: Option<String>,
    #[arg(long)]
    k_max: Option<String>,
    #[arg(long)]
    k_steps: Option<String>,
    /// threshold_only | threshold_and_complete | ladder | fixed:<p,...>
    #[arg(long)]
    p_policy: Option<String>,
    #[arg(long)]
    replicates: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    steps: Option<String>,
    #[arg(long)]
    tail: Option<String>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    coupling_form: Option<String>,
    #[arg(long)]
    freq_mean: Option<String>,
    #[arg(long)]
    freq_sigma: Option<String>,
    #[arg(long)]
    init_phases: Option<String>,
    #[arg(long)]
    max_attempts: Option<String>,
    /// Worker threads (falls back to $KURAMOTO_WORKERS).
    #[arg(long)]
    workers: Option<String>,
    /// Record per-task wall time (makes the CSV non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct KcArgs {
    csv: PathBuf,
    /// threshold | ladder:<i> | <probability>
    #[arg(long, default_value = "threshold")]
    p: String,
    /// Sizes to compare (default: all sizes in the file).
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Write `K,grand_mean_R,variation,in_window` to this file.
    #[arg(long)]
    variation_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PlotArgs {
    csv: PathBuf,
    /// r_vs_k | r_vs_n | drdk
    #[arg(long)]
    kind: String,
    /// Edge probability for r_vs_n and drdk.
    #[arg(long, default_value = "threshold")]
    p: String,
    /// Restrict r_vs_k to one network size.
    #[arg(long)]
    n: Option<usize>,
    /// Output file (default: <csv dir>/<kind>.svg).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure of a subcommand: exit code plus message for standard error.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: msg.into() }
    }
}

fn simulate_code(e: &Error) -> i32 {
    match e.root() {
        Error::RejectionExhausted { .. } => EXIT_REJECTION,
        Error::NumericalBlowup { .. } => EXIT_BLOWUP,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn kc_code(e: &Error) -> i32 {
    match e {
        Error::NoTransition { .. } => EXIT_NO_TRANSITION,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn with_code(code: impl Fn(&Error) -> i32) -> impl Fn(Error) -> CliError {
    move |e| CliError { code: code(&e), message: e.to_string() }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError { code: EXIT_IO, message: format!("{}: {e}", path.display()) }
}

/// Runs the CLI with explicit arguments and output streams; returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => cmd_simulate(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out, err),
        Command::Kc(a) => cmd_kc(&a, out),
        Command::Plot(a) => cmd_plot(&a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let usage = with_code(|_| EXIT_USAGE);
    let scheme: Scheme = a.scheme.parse().map_err(&usage)?;
    let form: CouplingForm = a.coupling_form.parse().map_err(&usage)?;
    let phase_init: PhaseInit = a.init_phases.parse().map_err(&usage)?;
    let cfg = SimConfig {
        dt: a.dt,
        steps: a.steps,
        tail: a.tail,
        scheme,
        coupling: CouplingSpec { k: a.k, form },
        record_series: false,
    };
    cfg.validate().map_err(&usage)?;
    if a.n == 0 {
        return Err(CliError::usage("--n must be positive"));
    }
    if let Some(p) = a.p {
        if !(0.0..=1.0).contains(&p) {
            return Err(CliError::usage(format!("--p must lie in [0, 1], got {p}")));
        }
    }
    let spec = EnsembleSpec { freq_mean: a.freq_mean, freq_sigma: a.freq_sigma, phase_init };

    // Same substreams as replicate 0 of a sweep.
    let rep = RngStream::new(a.seed).derive(a.n as u64).derive(replicate_label(0));
    let graph_stream = rep.derive(LABEL_TOPOLOGY).derive(0);
    let (graph, p) = if let Some(path) = &a.graph {
        let f = fs::File::open(path).map_err(io_err(path))?;
        let g = Graph::read_edge_list(std::io::BufReader::new(f)).map_err(&usage)?;
        if g.n() != a.n {
            return Err(CliError::usage(format!("{} has {} nodes, --n is {}", path.display(), g.n(), a.n)));
        }
        let pairs = (a.n * a.n.saturating_sub(1) / 2).max(1);
        let density = g.edge_count() as f64 / pairs as f64;
        (g, density)
    } else {
        let p = match (a.p, a.threshold) {
            (Some(p), false) => p,
            (None, true) => connectivity_threshold(a.n).map_err(&usage)?,
            _ => return Err(CliError::usage("give exactly one of --p, --threshold or --graph")),
        };
        let g = if p >= 1.0 {
            Graph::complete(a.n)
        } else if a.max_attempts == 0 {
            gen_er(a.n, p, &mut graph_stream.clone()).map_err(&usage)?
        } else {
            gen_connected(a.n, p, &graph_stream, a.max_attempts).map_err(with_code(simulate_code))?
        };
        (g, p)
    };
    if let Some(path) = &a.graph_out {
        let f = fs::File::create(path).map_err(io_err(path))?;
        graph.write_edge_list(std::io::BufWriter::new(f)).map_err(with_code(simulate_code))?;
    }
    let ensemble =
        init_ensemble(a.n, &mut rep.derive(LABEL_FREQUENCIES), &mut rep.derive(LABEL_PHASES), &spec).map_err(&usage)?;

    let summary = match &a.trace {
        Some(path) => {
            let f = fs::File::create(path).map_err(io_err(path))?;
            let mut trace = TraceWriter::new(std::io::BufWriter::new(f)).map_err(with_code(simulate_code))?;
            let s = run_observed(&graph, &ensemble, &cfg, |rec| trace.record(rec));
            trace.finish().map_err(with_code(simulate_code))?;
            s
        }
        None => run_observed(&graph, &ensemble, &cfg, |_| {}),
    }
    .map_err(with_code(simulate_code))?;

    let _ = writeln!(out, "N = {}", a.n);
    let _ = writeln!(out, "p = {}", g9(p));
    let _ = writeln!(out, "edges = {}", graph.edge_count());
    let _ = writeln!(out, "K = {}", g9(a.k));
    let _ = writeln!(out, "r_mean = {}", g9(summary.r_mean));
    let _ = writeln!(out, "r_std = {}", g9(summary.r_std));
    let _ = writeln!(out, "psi_final = {}", g9(summary.psi_final));
    Ok(())
}

fn sweep_flags(a: &SweepArgs) -> Vec<(String, String)> {
    let mut flags = Vec::new();
    let mut push = |k: &str, v: &Option<String>| {
        if let Some(v) = v {
            flags.push((k.to_string(), v.clone()));
        }
    };
    push("preset", &a.preset);
    push("seed", &a.seed);
    push("sizes", &a.sizes);
    push("k_max", &a.k_max);
    push("k_steps", &a.k_steps);
    push("p_policy", &a.p_policy);
    push("replicates", &a.replicates);
    push("dt", &a.dt);
    push("steps", &a.steps);
    push("tail", &a.tail);
    push("scheme", &a.scheme);
    push("coupling_form", &a.coupling_form);
    push("freq_mean", &a.freq_mean);
    push("freq_sigma", &a.freq_sigma);
    push("init_phases", &a.init_phases);
    push("max_attempts", &a.max_attempts);
    let workers = a.workers.clone().or_else(|| std::env::var(WORKERS_ENV).ok());
    push("workers", &workers);
    if a.timing {
        flags.push(("timing".into(), "true".into()));
    }
    flags
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let file = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            config::parse(&text).map_err(|e| CliError::usage(e.to_string()))?
        }
        None => Vec::new(),
    };
    let flags = sweep_flags(a);
    let cfg = config::resolve(&file, &flags).map_err(|e| CliError::usage(e.to_string()))?;
    let paper = flags.iter().chain(&file).find(|(k, _)| k == "preset").is_some_and(|(_, v)| v == "paper");
    if paper {
        let _ = writeln!(
            err,
            "warning: the paper preset runs {} simulations with N up to {}; expect many hours of CPU time",
            cfg.task_count().unwrap_or(0),
            cfg.sizes.last().copied().unwrap_or(0)
        );
    }
    fs::create_dir_all(&a.out).map_err(io_err(&a.out))?;
    let cfg_path = a.out.join("effective_config.txt");
    fs::write(&cfg_path, config::render(&cfg)).map_err(io_err(&cfg_path))?;

    let _ = writeln!(err, "running {} simulations", cfg.task_count().unwrap_or(0));
    let table = run_sweep(&cfg).map_err(|e| match e.root() {
        Error::InvalidParameter(_) if !matches!(e, Error::Task { .. }) => CliError::usage(e.to_string()),
        _ => CliError { code: EXIT_INCOMPLETE, message: format!("incomplete sweep: {e}") },
    })?;
    let csv_path = a.out.join("results.csv");
    table.write_csv_file(&csv_path).map_err(|e| CliError { code: EXIT_IO, message: e.to_string() })?;
    let _ = writeln!(out, "wrote {} rows to {}", table.len(), csv_path.display());
    Ok(())
}

fn load_table(path: &Path) -> Result<ResultTable, CliError> {
    // An unreadable input file counts as bad input, not an output failure.
    let table = ResultTable::read_csv_file(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    if table.is_empty() {
        return Err(CliError::usage(format!("{}: no data rows", path.display())));
    }
    Ok(table)
}

fn cmd_kc(a: &KcArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let sel: PSelector = a.p.parse().map_err(|e: Error| CliError::usage(e.to_string()))?;
    let table = load_table(&a.csv)?.select(&sel);
    let sizes = a.sizes.clone().unwrap_or_else(|| table.sizes());
    let est = estimate_kc(&table, &sizes).map_err(with_code(kc_code))?;
    let _ = writeln!(out, "k_c = {}", g9(est.k_c));
    let _ = writeln!(out, "method = {}", est.method);
    let sizes_s: Vec<String> = sizes.iter().map(usize::to_string).collect();
    let _ = writeln!(out, "p = {sel}, sizes = {}", sizes_s.join(","));
    let mut profile = String::from("K,grand_mean_R,variation,in_window\n");
    for i in 0..est.k_grid.len() {
        profile.push_str(&format!(
            "{},{},{},{}\n",
            g9(est.k_grid[i]),
            g9(est.grand_mean_by_k[i]),
            g9(est.variation_by_k[i]),
            u8::from(est.in_window(i))
        ));
    }
    let _ = write!(out, "{profile}");
    if let Some(path) = &a.variation_out {
        fs::write(path, profile).map_err(io_err(path))?;
    }
    Ok(())
}

fn cmd_plot(a: &PlotArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let kind: FigureKind = a.kind.parse().map_err(|e: Error| CliError::usage(e.to_string()))?;
    let sel: PSelector = a.p.parse().map_err(|e: Error| CliError::usage(e.to_string()))?;
    let table = load_table(&a.csv)?;
    let svg = plot::figure(kind, &table, &sel, a.n).map_err(|e| CliError::usage(e.to_string()))?;
    let path = a
        .out
        .clone()
        .unwrap_or_else(|| a.csv.parent().unwrap_or(Path::new(".")).join(format!("{}.svg", kind.as_str())));
    fs::write(&path, svg).map_err(io_err(&path))?;
    let _ = writeln!(out, "wrote {}", path.display());
    Ok(())
}
