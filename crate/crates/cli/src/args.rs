use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "slcount", version, about = "Exact exponents and lattice counts for norm balls in SL(n+1, R)")]
pub struct Cli {
    /// INI file of `key = value` defaults; a `[command]` section overrides the
    /// top level, and flags override both.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads for enumeration, quadrature and verification.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Output file (CSV for sweeps, JSON otherwise); stdout when absent.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// m₁, m₁′, their argmin sets and κ for one weight and bound.
    Exponent(ExponentArgs),
    /// Cone membership, σ values and the central-index condition.
    Classify(WeightArgs),
    /// Check every exponent statement for n = 2..=nmax.
    Verify(VerifyArgs),
    /// Count SL(n+1, Z) points in norm balls over a T grid.
    Count(CountArgs),
    /// Haar volume of norm balls over a T grid.
    Volume(VolumeArgs),
    /// Fit C·T^a·(log T)^b to one column of a sweep CSV.
    Fit(FitArgs),
    /// Count/volume ratios of two sweeps on the same T grid.
    Ratio(RatioArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Exponent(_) => "exponent",
            Command::Classify(_) => "classify",
            Command::Verify(_) => "verify",
            Command::Count(_) => "count",
            Command::Volume(_) => "volume",
            Command::Fit(_) => "fit",
            Command::Ratio(_) => "ratio",
        }
    }
}

#[derive(Debug, Args)]
pub struct WeightArgs {
    /// Rank n of SL(n+1).
    #[arg(long)]
    pub n: Option<usize>,
    /// Dominant weight as comma-separated coefficients of the fundamental weights.
    #[arg(long, allow_hyphen_values = true)]
    pub weight: Option<String>,
}

#[derive(Debug, Args)]
pub struct ExponentArgs {
    #[command(flatten)]
    pub weight: WeightArgs,
    /// Matrix-coefficient bound: hc, ht or oh.
    #[arg(long)]
    pub bound: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Largest rank checked.
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random weights per rank.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// standard, dual, ext:K or adjoint.
    #[arg(long)]
    pub rep: Option<String>,
    /// First radius; accepts decimals and `sqrt(K)`.
    #[arg(long)]
    pub t_start: Option<String>,
    /// Last radius. Without it the sweep is the single radius `--t-start`.
    #[arg(long)]
    pub t_end: Option<String>,
    /// Number of geometric grid points.
    #[arg(long)]
    pub t_steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Search nodes allowed per radius before the count is marked partial.
    #[arg(long)]
    pub node_budget: Option<u64>,
    /// Write the matrices of a single ball, one per line, instead of counts.
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// grid or mc.
    #[arg(long)]
    pub method: Option<String>,
    /// Nodes per axis (grid) or random directions (mc).
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Cap on the polar radius; the integrand is cut off beyond it.
    #[arg(long)]
    pub truncation: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Sweep CSV with a `T` column.
    pub input: PathBuf,
    /// Column to fit; defaults to the first of count, volume, ratio present.
    #[arg(long)]
    pub column: Option<String>,
    /// pure or log.
    #[arg(long)]
    pub model: Option<String>,
}

#[derive(Debug, Args)]
pub struct RatioArgs {
    /// CSV written by `count`.
    pub counts: PathBuf,
    /// CSV written by `volume`.
    pub volumes: PathBuf,
}
