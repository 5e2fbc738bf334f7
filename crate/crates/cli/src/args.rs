use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "ellprim", version, about = "Primitive divisors of elliptic group orders: scans, checks and bound reports")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// Emit JSON (one record per line) instead of text or CSV.
    #[arg(long, global = true)]
    pub json: bool,
    /// Wall-clock limit in milliseconds for each factorization call.
    #[arg(long, global = true, value_name = "MS")]
    pub budget_ms: Option<u64>,
    /// Working precision of the certified real arithmetic, at least 128.
    #[arg(long, global = true, value_name = "BITS")]
    pub precision_bits: Option<u32>,
    /// Seed for the randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Flat `key = value` file whose keys mirror the long flags; flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Worker threads for scans and suites.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// t_n, N_n, Ψ_n and the factorization of N_n at one point.
    Order(PointArgs),
    /// One row per (q, a, n) over a parameter grid, as CSV or JSON lines.
    Scan(ScanArgs),
    /// Run an invariant suite and print one line per check.
    Verify(VerifyArgs),
    /// Exact S-unit count Θ(x, S) against its upper estimates.
    SunitTheta(SunitArgs),
    /// Residue class of the primes p ≡ 1 mod d, p ≡ −1 mod n/d.
    CrtClass(CrtArgs),
    /// Every bound report available at one point.
    BoundReport(PointArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub q: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub a: i64,
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub q_min: Option<u64>,
    #[arg(long)]
    pub q_max: Option<u64>,
    /// Explicit traces (comma separated); default: every a with a² < 4q.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub a: Option<Vec<i64>>,
    #[arg(long)]
    pub n_min: Option<u64>,
    /// An n range with n_max < n_min is empty.
    #[arg(long)]
    pub n_max: Option<u64>,
    /// Defaults to json with --json, csv otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Checkpoint file for resuming an interrupted scan (needs --output).
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Stop after this many (q, a) pairs, leaving the checkpoint behind.
    #[arg(long, hide = true)]
    pub stop_after_pairs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Pprim,
    Sunits,
    Bounds,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Largest q of the parameter grid (default 25).
    #[arg(long)]
    pub q_max: Option<u64>,
    /// pprim: largest n of the grid (default 40). bounds and all: end of
    /// the exhaustive arithmetic range (default 1000000).
    #[arg(long)]
    pub n_max: Option<u64>,
    /// Random instances per estimate in the S-unit suite (default 500).
    #[arg(long)]
    pub instances: Option<usize>,
    /// Range of the S-unit sieve comparison (default 1000000).
    #[arg(long)]
    pub x_max: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct SunitArgs {
    #[arg(long)]
    pub x: f64,
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
    /// trivial, large_primes or general; default: all that apply.
    #[arg(long)]
    pub variant: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Odd,
    #[value(name = "3mod4")]
    ThreeMod4,
    #[value(name = "1mod4")]
    OneMod4,
}

#[derive(Debug, Clone, Args)]
pub struct CrtArgs {
    #[arg(long)]
    pub n: u64,
    /// Unitary divisor of n (odd n) or n/2 (even n).
    #[arg(long, conflicts_with = "p", required_unless_present = "p")]
    pub d: Option<u64>,
    /// Needed for even n together with --d.
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
    /// Classify this prime instead (needs n | p² − 1).
    #[arg(long)]
    pub p: Option<u64>,
}
