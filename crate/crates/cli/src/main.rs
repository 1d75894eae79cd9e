//! `rtg`: command-line experiments on random temporal graphs.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "rtg", version, about = "Random temporal graph experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a temporal graph and print it in the text format.
    Gen(GenArgs),
    /// Estimate a property's probability over a grid of densities.
    Sweep(SweepArgs),
    /// Simulate sequential gossip and report milestone call counts.
    Gossip(GossipArgs),
    /// Build square-pivot spanners with 2n-4 appearances.
    Spanner(SpannerArgs),
    /// Record foremost-tree growth trajectories on the complete graph.
    Trajectory(TrajectoryArgs),
    /// Check that a set of appearances keeps a graph temporally connected.
    Verify(VerifyArgs),
}

/// Flags shared by the experiment subcommands.
#[derive(Args, Debug, Clone)]
struct Common {
    /// Master seed; falls back to $TT_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker thread cap; all cores when omitted.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GenModel {
    Fnp,
    Complete,
    Poisson,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum, default_value_t = GenModel::Fnp)]
    model: GenModel,
    #[arg(long)]
    n: usize,
    /// Density; labels lie in [0, p]. Ignored by `complete`.
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Master seed; falls back to $TT_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Stream index under the master seed.
    #[arg(long, default_value_t = 0)]
    stream: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// p2p, source, first_source, connectivity, optimal_spanner or two_hop_source.
    #[arg(long)]
    property: String,
    /// fnp or poisson.
    #[arg(long, default_value = "fnp")]
    model: String,
    #[arg(long)]
    n: usize,
    /// Densities as multiples of ln n / n, strictly increasing.
    #[arg(long, value_delimiter = ',', required_unless_present = "p_abs", conflicts_with = "p_abs")]
    factors: Vec<f64>,
    /// Absolute densities, strictly increasing.
    #[arg(long = "p-abs", value_delimiter = ',')]
    p_abs: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Share one sample per trial across the grid (restricting it to each density).
    #[arg(long)]
    coupled: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct GossipArgs {
    /// co (no repeated pairs) or any (uniform pairs with repetition).
    #[arg(long)]
    model: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    /// Call limit for the `any` model; defaults to ceil(10 n ln n).
    #[arg(long)]
    call_cap: Option<u64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SpannerArgs {
    /// Vertex count of sampled graphs; taken from the file with --input.
    #[arg(long, required_unless_present = "input")]
    n: Option<usize>,
    /// Density; defaults to 5 ln n / n.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    /// Run once on a graph in the text format instead of sampling.
    #[arg(long, conflicts_with = "trials")]
    input: Option<PathBuf>,
    /// Exit with status 1 unless every trial finds a good square.
    #[arg(long)]
    require_success: bool,
    /// Write the first spanner found in the text format.
    #[arg(long)]
    spanner_out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct TrajectoryArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    /// Emit every stride-th k (the last k is always emitted).
    #[arg(long, default_value_t = 1)]
    stride: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Graph in the text format.
    #[arg(long)]
    input: PathBuf,
    /// Candidate spanner in the text format.
    #[arg(long)]
    spanner: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rtg: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
