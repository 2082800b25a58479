//! `ratecorr`: seeded experiments on stochastic rate-neuron networks, written as CSV.
//!
//! Exit codes: 0 success, 2 bad config or arguments, 3 numerical failure.

mod commands;
mod config;
mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ratecorr::analysis::SyncExperiment;
use ratecorr::SimConfig;

use config::{load, to_line, AnalyticCovConfig, ChaosScanConfig, CompareConfig, Experiment, InputScanConfig, Overrides, RadiusConfig, SpectrumConfig, SyncSolveConfig};
use output::{Header, Table};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Lib(ratecorr::Error),
}

impl From<ratecorr::Error> for CliError {
    fn from(e: ratecorr::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Lib(e) if e.is_config_error() => 2,
            CliError::Lib(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "ratecorr", version, about = "Correlation experiments on stochastic rate-neuron networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of the weighted adjacency.
    Spectrum(RunArgs),
    /// First-order analytic covariance and correlation on a time grid.
    AnalyticCov(RunArgs),
    /// Monte Carlo ensemble statistics.
    Simulate(RunArgs),
    /// Exact, first-order, second-order and analytic curves on one grid (four files).
    Compare(RunArgs),
    /// Correlation against the number of connections on circulant graphs.
    ChaosScan(RunArgs),
    /// Peak correlation against the baseline input.
    InputScan(RunArgs),
    /// Parameters satisfying the synchronization constraint.
    SyncSolve(RunArgs),
    /// Correlation curves of fully connected networks in the synchronizing regime.
    SyncRun(RunArgs),
    /// Radius of convergence of the sigmoid and arctangent Taylor series.
    Radius(RunArgs),
    /// Regenerate a CSV from the config and seed in its header.
    Replay {
        csv: PathBuf,
        /// Output file, or directory for `compare`; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    /// JSON config file or preset name (`table1`, `table2`).
    #[arg(long)]
    config: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file, or directory for `compare`; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Index of the stationary state when there are several.
    #[arg(long)]
    branch: Option<usize>,
    #[arg(long)]
    allow_irregular: bool,
    /// Print the resolved config as JSON and exit.
    #[arg(long)]
    print_config: bool,
}

enum Source<'a> {
    Args(&'a RunArgs),
    Json(&'a str),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Config(msg) => eprintln!("error: {msg}"),
                CliError::Lib(err) => eprintln!("error: {}: {err}", err.name()),
            }
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    let (name, args) = match &command {
        Command::Spectrum(a) => ("spectrum", a),
        Command::AnalyticCov(a) => ("analytic-cov", a),
        Command::Simulate(a) => ("simulate", a),
        Command::Compare(a) => ("compare", a),
        Command::ChaosScan(a) => ("chaos-scan", a),
        Command::InputScan(a) => ("input-scan", a),
        Command::SyncSolve(a) => ("sync-solve", a),
        Command::SyncRun(a) => ("sync-run", a),
        Command::Radius(a) => ("radius", a),
        Command::Replay { csv, out } => {
            let text = std::fs::read_to_string(csv).map_err(|e| CliError::Config(format!("reading {}: {e}", csv.display())))?;
            let header = Header::parse(&text).ok_or_else(|| CliError::Config(format!("{} has no ratecorr header", csv.display())))?;
            return execute(&header.command, Source::Json(&header.config), false, out.as_deref());
        }
    };
    execute(name, Source::Args(args), args.print_config, args.out.as_deref())
}

fn execute(name: &str, src: Source, print: bool, out: Option<&Path>) -> Result<(), CliError> {
    match name {
        "spectrum" => go::<SpectrumConfig>(name, src, print, out, commands::spectrum_table),
        "analytic-cov" => go::<AnalyticCovConfig>(name, src, print, out, commands::analytic_cov),
        "simulate" => go::<SimConfig>(name, src, print, out, commands::simulate),
        "compare" => go::<CompareConfig>(name, src, print, out, commands::compare),
        "chaos-scan" => go::<ChaosScanConfig>(name, src, print, out, commands::chaos),
        "input-scan" => go::<InputScanConfig>(name, src, print, out, commands::inputs),
        "sync-solve" => go::<SyncSolveConfig>(name, src, print, out, commands::sync_solve),
        "sync-run" => go::<SyncExperiment>(name, src, print, out, commands::sync_run),
        "radius" => go::<RadiusConfig>(name, src, print, out, commands::radius),
        other => Err(CliError::Config(format!("unknown subcommand {other:?} in header"))),
    }
}

fn go<T: Experiment>(name: &str, src: Source, print: bool, out: Option<&Path>, f: fn(&T) -> ratecorr::Result<Vec<Table>>) -> Result<(), CliError> {
    let cfg: T = match src {
        Source::Args(a) => {
            let o = Overrides {
                seed: a.seed,
                trials: a.trials,
                dt: a.dt,
                t_max: a.t_max,
                branch: a.branch,
                allow_irregular: a.allow_irregular,
            };
            load(a.config.as_deref(), &o)?
        }
        Source::Json(s) => serde_json::from_str(s).map_err(|e| CliError::Config(format!("header config: {e}")))?,
    };
    if print {
        println!("{}", serde_json::to_string_pretty(&cfg).expect("configs serialize"));
        return Ok(());
    }
    let header = Header { command: name.to_string(), seed: cfg.seed(), config: to_line(&cfg) };
    let tables = f(&cfg)?;
    write(&tables, &header, out)
}

fn write(tables: &[Table], header: &Header, out: Option<&Path>) -> Result<(), CliError> {
    let io = |path: &Path, e: std::io::Error| CliError::Config(format!("writing {}: {e}", path.display()));
    match (tables, out) {
        ([one], None) => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(one.render(header).as_bytes()).map_err(|e| io(Path::new("stdout"), e))
        }
        ([one], Some(path)) => std::fs::write(path, one.render(header)).map_err(|e| io(path, e)),
        (_, None) => Err(CliError::Config(format!("{} writes several files; pass --out <dir>", header.command))),
        (many, Some(dir)) => {
            std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
            for t in many {
                let path = dir.join(t.name);
                std::fs::write(&path, t.render(header)).map_err(|e| io(&path, e))?;
            }
            Ok(())
        }
    }
}
