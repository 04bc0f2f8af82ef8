//! `subgrowth`: subgroup-growth coefficients, orbit-count laws of random
//! coverings, and checks of their asymptotics.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use subgrowth::Error;

#[derive(Parser, Debug)]
#[command(name = "subgrowth", version, about, propagate_version = true)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Group name from the catalog (case-insensitive).
    #[arg(long, global = true)]
    group: Option<String>,

    /// Bias parameter: `p/q` or an integer is exact, a decimal is floating point.
    #[arg(long, global = true, default_value = "1")]
    x: String,

    /// Single size n.
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Comma-separated, nondecreasing list of sizes.
    #[arg(long = "n-grid", global = true)]
    n_grid: Option<String>,

    /// Largest n (coefficient count for `coeffs`).
    #[arg(long = "max-n", global = true)]
    max_n: Option<usize>,

    /// Relative tolerance for series truncation and root finding.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,

    /// Relative tolerance for the trapezoid quadrature.
    #[arg(long = "quad-tol", global = true, default_value_t = 1e-10)]
    quad_tol: f64,

    /// Seed for Monte Carlo draws.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Number of Monte Carlo draws for `moments`.
    #[arg(long, global = true, default_value_t = 0)]
    samples: usize,

    /// Directory for cached orbit rows; no caching when absent.
    #[arg(long = "cache-dir", global = true)]
    cache_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Group catalog file replacing the built-in one.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,

    /// Comma-separated verification suites (default: all).
    #[arg(long, global = true)]
    suite: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// List a_n(G) for n up to --max-n.
    Coeffs,
    /// Orbit counts A(G,n,k) for one n (--n) or all n up to --max-n.
    OrbitTable,
    /// Exact moments of the number of orbits at --n and --x.
    Moments,
    /// Leading-order mean and variance, refined centering and saddle point.
    Predict,
    /// Exact against predicted statistics along --n-grid.
    CltScan,
    /// Compare P_n J_n with the exact H_n(x).
    SaddleCheck,
    /// Log-concavity of A(G,n,k) in k for n up to --max-n.
    Logcc,
    /// Run the oracle-equivalence suites.
    Verify,
}

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}", path = .path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("json output: {0}")]
    Json(#[from] serde_json::Error),
}

impl Failure {
    /// 1 verification or I/O failure, 2 usage error, 3 numeric certification failure.
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Core(e) if e.is_certification() => 3,
            Failure::Core(
                Error::Io { .. }
                | Error::Cache { .. }
                | Error::Json(_)
                | Error::NotDivisible { .. }
                | Error::NonIntegerPolymer { .. },
            ) => 1,
            Failure::Core(_) => 2,
            Failure::Write { .. } | Failure::Csv(_) | Failure::Json(_) => 1,
        }
    }
}

/// Rendered output and whether a verification failed.
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub failed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command, &cli).and_then(|o| output::emit(&cli, o)) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
