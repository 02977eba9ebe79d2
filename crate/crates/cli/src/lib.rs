//! Command-line front end for the cap convexity toolkit.
//!
//! Reads a symmetric matrix and a cone description from files, runs one
//! of five commands, and emits a text or JSON report:
//!
//! - `certify`: exact certify-or-refute where the cone supports it,
//!   chained with sampled verifiers when the exact decider is
//!   inconclusive or unavailable;
//! - `search`: falsification only, combining the deterministic witness
//!   families with sampling;
//! - `props`: sign structure, order properties, copositivity, and
//!   duality-class report;
//! - `minimize`: minimum of the form over the cap;
//! - `ncp`: existence screen for the cone complementarity problem.
//!
//! Exit codes: 0 certified/guaranteed/consistent, 1 refuted or not
//! established, 2 inconclusive, 64 usage error, 65 data error. Reports
//! are deterministic functions of the inputs and the seed; the
//! `SPHCONVEX_THREADS` environment variable caps parallelism without
//! changing any output byte.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

pub mod commands;
mod io;
mod render;

pub use io::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

#[derive(Debug, Parser)]
#[command(
    name = "sphconvex",
    version,
    about = "Certify, refute, probe, and optimize quadratic forms on cone caps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Human-readable lines, floats rounded to six significant digits.
    Text,
    /// One JSON object; floats carry full round-trip precision.
    Json,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Matrix file: first line the dimension n, then n*n entries.
    #[arg(long, value_name = "PATH")]
    pub matrix: PathBuf,
    /// Cone description file (JSON).
    #[arg(long, value_name = "PATH")]
    pub cone: PathBuf,
    /// Sample count for the randomized checks.
    #[arg(long, default_value_t = 20_000)]
    pub samples: u64,
    /// Certification tolerance; sampled refutation thresholds never go
    /// below 1e-7.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for all randomized draws.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ScreenArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Also scan this many random cap geodesics for convexity
    /// violations of the composed function.
    #[arg(long, value_name = "M")]
    pub probe_geodesics: Option<u64>,
    /// Write every sampled margin to a CSV file (criterion,index,margin).
    #[arg(long, value_name = "PATH")]
    pub dump_margins: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Number of descent starting points.
    #[arg(long, default_value_t = 20)]
    pub restarts: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide convexity of the form on the cap; exact where possible.
    Certify(ScreenArgs),
    /// Hunt for violations only; never certifies.
    Search(ScreenArgs),
    /// Report operator properties tied to cap convexity.
    Props(CommonArgs),
    /// Minimize the form over the cap.
    Minimize(OptimizeArgs),
    /// Existence screen for the cone complementarity problem.
    Ncp(OptimizeArgs),
}

/// Parses the process arguments and runs; returns the exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    run(cli)
}

/// Runs a parsed command, honoring `SPHCONVEX_THREADS`.
pub fn run(cli: Cli) -> i32 {
    let threads = match std::env::var("SPHCONVEX_THREADS") {
        Err(_) => None,
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Some(k),
            _ => {
                eprintln!("error: SPHCONVEX_THREADS must be a positive integer, got {raw:?}");
                return EXIT_USAGE;
            }
        },
    };
    match threads {
        None => dispatch(cli),
        Some(k) => {
            let pool = match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
                Ok(pool) => pool,
                Err(e) => {
                    eprintln!("error: cannot build thread pool: {e}");
                    return EXIT_USAGE;
                }
            };
            pool.install(|| dispatch(cli))
        }
    }
}

fn dispatch(cli: Cli) -> i32 {
    match cli.command {
        Command::Certify(args) => finish(args.common.format, commands::certify_cmd(&args)),
        Command::Search(args) => finish(args.common.format, commands::search_cmd(&args)),
        Command::Props(args) => finish(args.format, commands::props_cmd(&args)),
        Command::Minimize(args) => finish(args.common.format, commands::minimize_cmd(&args)),
        Command::Ncp(args) => finish(args.common.format, commands::ncp_cmd(&args)),
    }
}

fn finish<R: commands::Report>(format: Format, outcome: Result<(R, i32), CliError>) -> i32 {
    match outcome {
        Ok((report, code)) => {
            match format {
                Format::Json => match serde_json::to_string(&report) {
                    Ok(line) => println!("{line}"),
                    Err(e) => {
                        eprintln!("error: serializing report: {e}");
                        return EXIT_DATA;
                    }
                },
                Format::Text => print!("{}", report.text()),
            }
            code
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
