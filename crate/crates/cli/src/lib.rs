//! Command-line front end for the `hyperbell` library.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 enumeration budget refusal, 4 I/O or internal error.

pub mod cache;
pub mod commands;
pub mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperbell::exact::Nat;
use thiserror::Error;

pub use output::{Format, OutputDocument};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{failed} of {total} checks failed")]
    VerificationFailed { failed: usize, total: usize },
    #[error("refusing to enumerate {predicted} elements (budget {budget}); raise --budget to proceed")]
    Budget { predicted: Nat, budget: u64 },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::VerificationFailed { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::Budget { .. } => 3,
            CliError::Io(_) | CliError::Internal(_) => 4,
        }
    }
}

impl From<hyperbell::Error> for CliError {
    fn from(e: hyperbell::Error) -> CliError {
        match e {
            hyperbell::Error::BudgetExceeded { predicted, budget } => CliError::Budget { predicted, budget },
            hyperbell::Error::InvalidArgument(msg) => CliError::Usage(msg),
            other => CliError::Internal(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "hyperbell", version, about = "Exact higher-order Bell and Stirling numbers")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "plain")]
    pub format: Format,

    /// Directory for cached Stirling triangles.
    #[arg(long, global = true, env = "HYPERBELL_CACHE", value_name = "PATH")]
    pub cache: Option<PathBuf>,

    /// Significant digits for decimal renderings of rationals.
    #[arg(long, global = true, default_value_t = 6, value_name = "DIGITS")]
    pub precision: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grid of B_n^(m) (or one Stirling row set with --kind stirling).
    Table(TableArgs),
    /// Rows of S^(m)(n,k) with their Bell row sums.
    Stirling(StirlingArgs),
    /// Census or full listing of the order-m partitions of an n-set.
    Enumerate(EnumerateArgs),
    /// Check the Bell/Stirling identities and cross-route laws.
    Verify(VerifyArgs),
    /// Coefficients of E_m(x), or of (E_(m-1)(x) - 1)^k / k! with --k.
    Egf(EgfArgs),
    /// Ratio, average cardinality and one-box share as m grows.
    Asymptotic(AsymptoticArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Bell,
    Stirling,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_enum, default_value = "bell")]
    pub kind: TableKind,
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
    #[arg(long, default_value_t = 5)]
    pub m_max: usize,
    /// Order, for --kind stirling.
    #[arg(long)]
    pub m: Option<usize>,
    /// Single row, for --kind stirling.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct StirlingArgs {
    #[arg(long)]
    pub m: usize,
    /// Emit only row n.
    #[arg(long, conflicts_with = "n_max")]
    pub n: Option<usize>,
    /// Emit rows 1..=n-max.
    #[arg(long)]
    pub n_max: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    /// Stream canonical serializations, one per line, instead of the census.
    #[arg(long)]
    pub list: bool,
    /// Largest number of elements to visit.
    #[arg(long, default_value_t = hyperbell::enumerator::DEFAULT_BUDGET, value_name = "COUNT")]
    pub budget: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated check names, or `all`.
    #[arg(long, default_value = "all", value_delimiter = ',')]
    pub identities: Vec<String>,
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
    #[arg(long, default_value_t = 5)]
    pub m_max: usize,
    /// Fix the split point of the split identities instead of sweeping it.
    #[arg(long)]
    pub r: Option<usize>,
    /// Enumeration budget for the enumeration checks.
    #[arg(long, default_value_t = hyperbell::enumerator::DEFAULT_BUDGET, value_name = "COUNT")]
    pub budget: u64,
    /// Add one to S^(order)(n,k) before checking, as `order:n:k`.
    #[arg(long, hide = true, value_name = "ORDER:N:K")]
    pub inject_fault: Option<String>,
}

#[derive(Debug, Args)]
pub struct EgfArgs {
    #[arg(long)]
    pub m: usize,
    /// Truncation order N.
    #[arg(long, default_value_t = 8)]
    pub order: usize,
    /// Dump the Stirling generating function for this k instead of E_m.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AsymptoticArgs {
    #[arg(long)]
    pub n: usize,
    /// Comma-separated orders.
    #[arg(long = "m", value_delimiter = ',', required = true)]
    pub m_list: Vec<usize>,
}

/// Runs one parsed invocation, writing data to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    let ctx = commands::Context {
        format: cli.format,
        precision: cli.precision,
        cache: cli.cache.clone(),
    };
    match &cli.command {
        Command::Table(a) => commands::table(&ctx, a, out),
        Command::Stirling(a) => commands::stirling(&ctx, a.m, a.n, a.n_max, out),
        Command::Enumerate(a) => commands::enumerate(&ctx, a, out),
        Command::Verify(a) => commands::verify(&ctx, a, out),
        Command::Egf(a) => commands::egf(&ctx, a, out),
        Command::Asymptotic(a) => commands::asymptotic(&ctx, a, out),
    }
}

pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out);
    let flushed = out.flush();
    match result.and(flushed.map_err(CliError::from)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hyperbell: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
