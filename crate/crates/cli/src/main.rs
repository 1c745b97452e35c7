mod commands;
mod manifest;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Quantum-transport efficiency on tree-like networks.
#[derive(Debug, Parser)]
#[command(name = "qtree", version, args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a tree and write it as an edge list.
    Gen(GenArgs),
    /// Efficiency report (chi, bounds, rho(E*)) of an edge-list file.
    Chi(ChiArgs),
    /// Monte Carlo sweep over scale-free trees.
    Sweep(SweepArgs),
    /// Fit the critical exponent from a CSV column.
    FitKappa(FitKappaArgs),
    /// Return amplitude and return probability over time.
    Timeseries(TimeseriesArgs),
    /// Tabulate infinite-size closed forms.
    ClosedForm(ClosedFormArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Chain,
    Star,
    Dendrimer,
    Vicsek,
    Sft,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Node count (chain, star, sft).
    #[arg(long)]
    pub n: Option<usize>,
    /// Functionality (dendrimer, vicsek).
    #[arg(long)]
    pub f: Option<usize>,
    /// Generation (dendrimer, vicsek).
    #[arg(long)]
    pub g: Option<usize>,
    /// Scale-free exponent (sft).
    #[arg(long)]
    pub s: Option<f64>,
    /// Largest functionality (sft); defaults to n - 1.
    #[arg(long)]
    pub f_max: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct ChiArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// connectivity, adjacency or custom=<path> (two columns f,value).
    #[arg(long, default_value = "connectivity")]
    pub potential: String,
    /// Skip diagonalization; rho(E*) from exact nullity, no chi_exact.
    #[arg(long)]
    pub structural_only: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    /// Comma-separated exponents.
    #[arg(long, value_delimiter = ',', required_unless_present = "s_range")]
    pub s: Vec<f64>,
    /// start:stop:step, stop included.
    #[arg(long, conflicts_with = "s")]
    pub s_range: Option<String>,
    /// Comma-separated node counts.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Largest functionality; defaults to n - 1.
    #[arg(long)]
    pub f_max: Option<usize>,
    /// Realizations per row.
    #[arg(long, required_unless_present = "paper_r", conflicts_with = "paper_r")]
    pub r: Option<usize>,
    /// r = 10^6 / n.
    #[arg(long)]
    pub paper_r: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// spectral-exact, structural-delta0 or structural-measured.
    #[arg(long, default_value = "structural-delta0")]
    pub estimator: String,
    /// Worker threads; never changes the output.
    #[arg(long, env = "QTREE_WORKERS")]
    #[serde(skip)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct FitKappaArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Column holding 1 - chi.
    #[arg(long)]
    pub y_column: String,
    /// Column holding the control parameter.
    #[arg(long, default_value = "s")]
    pub x_column: String,
    /// Offset from the critical point: identity, inv (1/x) or sub:<c> (x - c).
    #[arg(long, default_value = "identity")]
    pub offset: String,
    /// Smallest offset kept.
    #[arg(long)]
    pub min_offset: Option<f64>,
    /// Largest offset kept.
    #[arg(long)]
    pub max_offset: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct TimeseriesArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "connectivity")]
    pub potential: String,
    /// Defaults to 50 N / (lambda_max - lambda_min).
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long, default_value_t = qtree::efficiency::DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedFamily {
    Dendrimer,
    Vicsek,
    Sft,
}

#[derive(Debug, Args, Serialize)]
pub struct ClosedFormArgs {
    #[arg(long, value_enum)]
    pub family: ClosedFamily,
    /// Smallest functionality (dendrimer, vicsek).
    #[arg(long, default_value_t = 3)]
    pub f_min: u64,
    /// Largest functionality (dendrimer, vicsek).
    #[arg(long, default_value_t = 64)]
    pub f_max: u64,
    /// Comma-separated exponents (sft).
    #[arg(long, value_delimiter = ',')]
    pub s: Vec<f64>,
    /// start:stop:step (sft), stop included.
    #[arg(long, conflicts_with = "s")]
    pub s_range: Option<String>,
    /// Offsets s - 2 on a log grid lo:hi:points (sft).
    #[arg(long, conflicts_with_all = ["s", "s_range"])]
    pub log_offsets: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Write to this path instead of the recorded output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long)]
    pub workers: Option<usize>,
}

/// Raised when every row of a sweep failed.
#[derive(Debug)]
pub struct AllRowsFailed;

impl std::fmt::Display for AllRowsFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("every sweep row failed; see the status column")
    }
}

impl std::error::Error for AllRowsFailed {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<AllRowsFailed>().is_some() {
        return 5;
    }
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<qtree::Error>() {
            return match e {
                qtree::Error::SizeLimit { .. } => 4,
                qtree::Error::Io(_) => 3,
                _ => 2,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 3;
        }
    }
    2
}

pub fn run(argv: Vec<OsString>) -> anyhow::Result<()> {
    let cli = Cli::try_parse_from(&argv)?;
    let recorded: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    commands::dispatch(cli.command, recorded)
}

fn main() -> ExitCode {
    let argv: Vec<OsString> = std::env::args_os().collect();
    if let Err(e) = Cli::try_parse_from(&argv) {
        e.print().ok();
        return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
    }
    match run(argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
