//! Command-line front end: coefficient caches, configuration files and
//! JSON/CSV report emission around `satotate-core`.
//!
//! Exit codes: 0 when every declared check passes, 1 when a verification
//! check fails, 2 for usage errors (bad flags, bad config, missing cache),
//! 3 for runtime failures (I/O, corrupted cache).

pub mod cache;
mod commands;
pub mod config;
pub mod emit;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use satotate_core::harness::{Standardization, SupportMode};
use satotate_core::RuleKind;

use crate::config::{
    parse_a, parse_checkpoints, parse_curve, parse_epsilon, parse_gammas, parse_limit, parse_pair,
    parse_threads,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

pub const CACHE_DIR_ENV: &str = "SATOTATE_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(format!("unknown output format `{other}` (json, csv)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Tau,
    Ec,
    Synth,
}

#[derive(Debug, Parser)]
#[command(
    name = "satotate",
    version,
    about = "Sato–Tate coefficient tables and desk-scale checks"
)]
pub struct Cli {
    /// Worker thread cap (outputs do not depend on it).
    #[arg(long, global = true, value_parser = parse_threads)]
    pub threads: Option<usize>,
    /// Cache directory [default: .satotate-cache].
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    pub cache_dir: Option<PathBuf>,
    /// Flat key = value file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Rendering of the report on stdout [default: json].
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Directory for report files [default: <cache-dir>/reports].
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Record wall-clock time in reports (makes them run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact τ table with normalized values and prime angles, cached.
    Tau(TauArgs),
    /// Frobenius traces of y² = x³ + Ax + B, cached with the normalized sequence.
    Ec(EcArgs),
    /// Seeded synthetic Sato–Tate sequence, cached.
    Synth(SynthArgs),
    /// Prime-angle summary of a cached source.
    Angles(AnglesArgs),
    /// Sato–Tate constants and how each was obtained.
    Constants,
    /// Run a verifier on a cached sequence.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Auxiliary statistics.
    #[command(subcommand)]
    Stats(StatsCommand),
}

#[derive(Debug, Args)]
pub struct TauArgs {
    #[arg(long, value_parser = parse_limit)]
    pub limit: Option<u64>,
    /// Run the integrity checks and exit 1 if any fails.
    #[arg(long)]
    pub check: bool,
    /// Also write `n,tau(n)` as decimal CSV.
    #[arg(long)]
    pub export_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EcArgs {
    /// `A,B`.
    #[arg(long, value_parser = parse_curve, allow_hyphen_values = true)]
    pub curve: Option<(i64, i64)>,
    #[arg(long, value_parser = parse_limit)]
    pub limit: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RuleArgs {
    /// Prime-power rule: hecke-chebyshev, truncate-zero, exact-integer-hecke.
    #[arg(long)]
    pub rule: Option<RuleKind>,
    /// Growth exponent ϱ of the prime-power bound [default: 0.1].
    #[arg(long)]
    pub rho: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_parser = parse_limit)]
    pub limit: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub rule: RuleArgs,
}

/// Which cached sequence a command reads.
#[derive(Debug, Args)]
pub struct SourceArgs {
    #[arg(long, value_enum, default_value_t = Source::Tau)]
    pub source: Source,
    /// Cache limit to read; without it the smallest sufficient cache is used.
    #[arg(long, value_parser = parse_limit)]
    pub limit: Option<u64>,
    /// Synthetic seed [default: 42].
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub rule: RuleArgs,
    /// Curve `A,B` for the ec source.
    #[arg(long, value_parser = parse_curve, allow_hyphen_values = true)]
    pub curve: Option<(i64, i64)>,
}

#[derive(Debug, Args)]
pub struct AnglesArgs {
    #[command(flatten)]
    pub src: SourceArgs,
    #[arg(long, value_parser = parse_gammas)]
    pub gammas: Option<Vec<f64>>,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Exceedance fractions of |a_n| against (log n)^{-1/2±ε}.
    Thm1 {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long, value_parser = parse_epsilon)]
        epsilon: Option<f64>,
        #[arg(long, value_parser = parse_checkpoints)]
        checkpoints: Option<String>,
        #[arg(long)]
        monotone_slack: Option<f64>,
    },
    /// Partial-sum cancellation |S(x)| / ∑|a_n|.
    Thm2 {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long, value_parser = parse_checkpoints)]
        checkpoints: Option<String>,
        #[arg(long)]
        ratio_max: Option<f64>,
    },
    /// Central limit behaviour of log|a_n|.
    Thm3 {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long, value_parser = parse_limit)]
        x: Option<u64>,
        #[arg(long, default_value = "nonzero")]
        filter: SupportMode,
        /// Exponent A > 1 of the floor-a filter [default: 2].
        #[arg(long = "A", value_parser = parse_a)]
        a: Option<f64>,
        #[arg(long, default_value = "finite-size")]
        standardization: Standardization,
        #[arg(long)]
        ks_max: Option<f64>,
        #[arg(long)]
        skew_max: Option<f64>,
        /// `target,tol` for μ / log₂x.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        mu_band: Option<(f64, f64)>,
        /// `target,tol` for σ² / log₂x.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        sigma2_band: Option<(f64, f64)>,
    },
    /// Absolute, square and γ-power mean values.
    LemmaSums {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long, value_parser = parse_gammas)]
        gammas: Option<Vec<f64>>,
        #[arg(long, value_parser = parse_checkpoints)]
        checkpoints: Option<String>,
        /// `lo,hi` for the last (∑ a_n²/n) / log x.
        #[arg(long, value_parser = parse_pair)]
        square_mean_band: Option<(f64, f64)>,
    },
    /// Hall–Tenenbaum mean-value inequality for f(n) = |a_n|^power.
    HallTenenbaum {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long, value_parser = parse_limit)]
        x: Option<u64>,
        #[arg(long, default_value_t = 2.0)]
        power: f64,
    },
    /// Prime-power lower bound, angle discrepancy and small-|a_p| tail.
    Assumptions {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long = "A", value_parser = parse_a)]
        a: Option<f64>,
        /// Number of intervals in the angle grid.
        #[arg(long, default_value_t = 180)]
        grid: usize,
        #[arg(long, value_parser = parse_checkpoints)]
        checkpoints: Option<String>,
        #[arg(long, default_value_t = 6)]
        k_max: u32,
        #[arg(long)]
        a2_max: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum StatsCommand {
    /// μ and σ² of log|a_p| over primes up to x.
    LogMoments {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long, value_parser = parse_limit)]
        x: Option<u64>,
        /// Keep primes with |a_p| > floor.
        #[arg(long, default_value_t = 0.0)]
        floor: f64,
    },
    /// Primes with a_p = 0, per dyadic block.
    Census {
        #[command(flatten)]
        src: SourceArgs,
    },
    /// Partial product κ(x) over primes with vanishing trace.
    Kappa {
        #[arg(long, value_parser = parse_curve, allow_hyphen_values = true)]
        curve: Option<(i64, i64)>,
        #[arg(long, value_parser = parse_limit)]
        limit: Option<u64>,
        #[arg(long, value_parser = parse_checkpoints)]
        checkpoints: Option<String>,
    },
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match commands::run(cli) {
        Ok(code) => code,
        Err(commands::CliError::Usage(e)) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
        Err(commands::CliError::Runtime(e)) => {
            eprintln!("error: {e:#}");
            EXIT_RUNTIME
        }
    }
}
