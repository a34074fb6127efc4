use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Collision-angle and collision-count verification for linear point billiards.
#[derive(Debug, Parser)]
#[command(name = "nbilliard", version)]
pub struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Directory for output files when `--output` is not given.
    #[arg(long, global = true, env = "NBILLIARD_OUT_DIR")]
    pub out_dir: Option<PathBuf>,

    /// Run Monte-Carlo loops on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Principal angles between two binary collision subspaces.
    Angles(AnglesArgs),
    /// Count collisions of sampled trajectories in the reduced three-body arrangement.
    Simulate(SimulateArgs),
    /// Collision bound over mass ratios (alpha, beta) with the middle mass fixed to 1.
    Grid(GridArgs),
    /// Run the verification suites.
    VerifyAll(VerifyArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct AnglesArgs {
    /// Number of particles.
    #[arg(long)]
    pub n: usize,
    /// Spatial dimension.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Comma-separated masses; unit masses when omitted.
    #[arg(long, value_delimiter = ',')]
    pub masses: Option<Vec<f64>>,
    /// Two pair labels, e.g. `12,23` or `3-11,4-11`.
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub pairs: Vec<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingArg {
    PhaseSlice,
    Sphere,
    SegmentSeeded,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// Three comma-separated masses.
    #[arg(long, value_delimiter = ',', default_value = "1,1,1")]
    pub masses: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "phase-slice")]
    pub sampling: SamplingArg,
    /// Stop a trajectory after this many collisions.
    #[arg(long, default_value_t = 200)]
    pub max_events: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridFormat {
    Csv,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    #[arg(long, default_value_t = 10.0)]
    pub alpha_hi: f64,
    #[arg(long, default_value_t = 10.0)]
    pub beta_hi: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: GridFormat,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Suites to run (comma-separated); all when omitted.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override every Monte-Carlo sample count.
    #[arg(long)]
    pub trials: Option<u64>,
}
