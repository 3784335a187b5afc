use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use owagen::explore::{DEFAULT_RESOLUTION, DEFAULT_SAMPLES};
use owagen::DEFAULT_EPSILON;
use owagen_service::DEFAULT_PORT;

#[derive(Debug, Parser)]
#[command(
    name = "owagen",
    version,
    about = "OWA weights from a risk level and a trade-off level"
)]
pub struct Cli {
    /// Output format for results printed to stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate the weight vector for a decision point.
    Generate(PointArgs),
    /// OWA-aggregate criteria values.
    Aggregate(AggregateArgs),
    /// Orness, andness, dispersion and trade-off of a weight vector.
    Metrics(WeightSource),
    /// Calibrate a Latin hypercube sample; writes sweep.csv and epsilon_curve.csv.
    Sweep(SweepArgs),
    /// Sweep, then fit a parabola to the feasibility frontier.
    Frontier(SweepArgs),
    /// Metric grids over the (alpha, delta) lattice; writes grid_<metric>_n<k>.csv.
    Grid(GridArgs),
    /// Serve the HTTP API (and optionally a static front end).
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
}

#[derive(Debug, Args)]
pub struct WeightSource {
    /// Comma-separated weights, smallest criterion first.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        conflicts_with = "weights_file"
    )]
    pub weights: Option<Vec<f64>>,
    /// File of weights separated by commas or whitespace.
    #[arg(long)]
    pub weights_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AggregateArgs {
    #[command(flatten)]
    pub source: WeightSource,
    #[arg(long, conflicts_with_all = ["weights", "weights_file"], requires_all = ["delta", "n"])]
    pub alpha: Option<f64>,
    #[arg(long, requires = "alpha")]
    pub delta: Option<f64>,
    #[arg(long, requires = "alpha")]
    pub n: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Comma-separated criteria values.
    #[arg(
        long,
        required = true,
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    pub criteria: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Number of criteria; repeat or comma-separate for several.
    #[arg(long, required = true, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// orness, dispersion, tradeoff or all.
    #[arg(long, default_value = "all")]
    pub metric: String,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: usize,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = DEFAULT_PORT)]
    pub port: u16,
    /// Directory of static files served at `/`.
    #[arg(long)]
    pub static_dir: Option<PathBuf>,
}
