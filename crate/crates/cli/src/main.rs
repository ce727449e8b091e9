//! `monocorr`: build families, evaluate correlation bounds, run the property
//! suite and seeded scans. JSON or CSV on stdout (or `--out`), errors as JSON
//! on stderr.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or input error.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

/// Default coordinate cap; `--allow-large` raises it to the library maximum.
pub const DEFAULT_N_CAP: usize = 20;

#[derive(Parser, Debug)]
#[command(
    name = "monocorr",
    version,
    about = "Exact correlation bounds for monotone Boolean functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Allow up to 24 coordinates (a table then takes 128 MiB).
    #[arg(long, global = true)]
    pub allow_large: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Mean, influences, regularity, level weights and noise stability of one function.
    Analyze(Inputs),
    /// Full bound report for a pair (f, g).
    Bounds(Inputs),
    /// Bound report and checks for a named built-in pair.
    Pair(PairArgs),
    /// Run the seeded property suite.
    Verify(VerifyArgs),
    /// Search instances for the extremal value of a target functional.
    Scan(ScanArgs),
}

/// Functions given as JSON family specs or table files; specs come first.
#[derive(Args, Debug)]
pub struct Inputs {
    /// Family spec as JSON, e.g. '{"kind":"majority","n":3}'. Repeatable.
    #[arg(long)]
    pub spec: Vec<String>,

    /// Table file: {"n","kind","table"} or {"n","family"}. Repeatable.
    #[arg(long)]
    pub table: Vec<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PairArgs {
    /// talagrand_ball, tribes_dual, example31, example32, example54 or cormaj.
    #[arg(long)]
    pub name: String,
    #[arg(long)]
    pub n: Option<usize>,
    /// Target measure.
    #[arg(long)]
    pub a: Option<f64>,
    /// Tribe width.
    #[arg(long)]
    pub r: Option<usize>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub n_min: usize,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    #[arg(long, default_value_t = 500)]
    pub pairs: usize,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// wrong2, statement33, chang_max or tightness_min.
    #[arg(long)]
    pub target: String,
    /// Generator as JSON; defaults to random monotone pairs on 4..=n-max coordinates.
    #[arg(long)]
    pub generator: Option<String>,
    #[arg(long, default_value_t = 200)]
    pub budget: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            return report(&CliError::Usage(
                e.render().to_string().trim_end().to_string(),
            ))
        }
    };
    match commands::run(&cli) {
        Ok(outcome) => match output::emit(&cli.common, &outcome.text) {
            Ok(()) if outcome.passed => ExitCode::SUCCESS,
            Ok(()) => ExitCode::from(1),
            Err(e) => report(&e),
        },
        Err(e) => report(&e),
    }
}

fn report(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code())
}
