use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "crows", version, about = "Row-constrained pooling designs for high-throughput screens")]
pub struct Cli {
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "CROWS_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Build a design by multi-start coordinate exchange.
    Construct(ConstructArgs),
    /// Build the best design for each row constraint in a list.
    Sweep(SweepArgs),
    /// Lower bound on Q for designs whose rows are all full.
    Bound(BoundArgs),
    /// Compare a design against its lower bound.
    Certify(CertifyArgs),
    /// Call hits from pooled responses.
    Analyze(AnalyzeArgs),
    /// Build a shifted transversal design.
    Std(StdArgs),
    /// Decode well labels of a pooling design.
    PoolhitsDecode(DecodeArgs),
    /// Call hits from one-compound-one-well responses.
    Ocow(OcowArgs),
    /// Run a method-comparison study.
    Simulate(SimulateArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Construct(_) => "construct",
            Command::Sweep(_) => "sweep",
            Command::Bound(_) => "bound",
            Command::Certify(_) => "certify",
            Command::Analyze(_) => "analyze",
            Command::Std(_) => "std",
            Command::PoolhitsDecode(_) => "poolhits-decode",
            Command::Ocow(_) => "ocow",
            Command::Simulate(_) => "simulate",
            Command::Replay(_) => "replay",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum InitArg {
    /// Row plus-counts uniform on `0..=c`.
    Uniform,
    /// Every row holds exactly `c` compounds.
    Tight,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub c: usize,
    #[arg(long, default_value_t = crows::construct::DEFAULT_STARTS)]
    pub starts: usize,
    #[arg(long, default_value_t = crows::construct::DEFAULT_MAX_PASSES)]
    pub max_passes: usize,
    #[arg(long, value_enum, default_value_t = InitArg::Uniform)]
    pub init: InitArg,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write `well: compound,...` lines.
    #[arg(long)]
    pub pool_sheet: Option<PathBuf>,
    /// `index,label` CSV naming the compounds on the pool sheet.
    #[arg(long)]
    pub compound_map: Option<PathBuf>,
    /// Per-start results.
    #[arg(long)]
    pub log: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Ranges and values such as `2..144` or `2,5,10..12`.
    #[arg(long)]
    pub c_list: String,
    #[arg(long, default_value_t = crows::construct::DEFAULT_STARTS)]
    pub starts: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub c: usize,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CertifyArgs {
    #[arg(long)]
    pub design: PathBuf,
    #[arg(long)]
    pub c: usize,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub design: PathBuf,
    #[arg(long)]
    pub response: PathBuf,
    #[arg(long)]
    pub sigma: f64,
    #[arg(long, default_value = "positive")]
    pub direction: crows::Direction,
    /// Apply the sigma/8 cut on the centered and scaled coding.
    #[arg(long)]
    pub standardized_threshold: bool,
    /// Per-lambda coefficients on the `±1` coding.
    #[arg(long)]
    pub profile_out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct StdArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub a: usize,
    #[arg(long)]
    pub gamma: usize,
    /// Reject designs whose largest pool exceeds this.
    #[arg(long)]
    pub c: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct DecodeArgs {
    #[arg(long)]
    pub design: PathBuf,
    /// `well,label` CSV with hit/miss labels.
    #[arg(long, conflicts_with = "response", required_unless_present = "response")]
    pub labels: Option<PathBuf>,
    /// Raw responses to binarize instead of labels.
    #[arg(long, requires_all = ["mu", "sigma"])]
    pub response: Option<PathBuf>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, default_value_t = crows::baselines::DEFAULT_BINARIZE_LEVEL)]
    pub level: f64,
    #[arg(long, default_value = "positive")]
    pub direction: crows::Direction,
    /// Errors tolerated by the decoder.
    #[arg(long = "E")]
    pub errors: usize,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct OcowArgs {
    #[arg(long)]
    pub response: PathBuf,
    /// Background mean, or its pilot estimate with `--lenth`.
    #[arg(long)]
    pub mu: f64,
    #[arg(long, required_unless_present = "lenth")]
    pub sigma: Option<f64>,
    /// Estimate the noise scale from the responses.
    #[arg(long)]
    pub lenth: bool,
    #[arg(long, default_value = "positive")]
    pub direction: crows::Direction,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// `table1`, `desk`, or a single preset name such as `n24-k31-c10`.
    #[arg(long)]
    pub preset: String,
    #[arg(long, value_delimiter = ',', default_value = "crows,poolhits,ocow")]
    pub methods: Vec<crows::sim::Method>,
    #[arg(long = "D", value_delimiter = ',', default_value = "0.75,1,1.5,2,2.25,3,4")]
    pub d: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    /// Active compounds per replicate.
    #[arg(long, default_value_t = 1)]
    pub actives: usize,
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value = "positive")]
    pub direction: crows::Direction,
    /// For example `strong-synergistic` or `weak-antagonistic`.
    #[arg(long)]
    pub interactions: Option<crows::sim::InteractionKind>,
    /// Estimate mu and sigma from a simulated pilot.
    #[arg(long)]
    pub pilot: bool,
    /// Construction starts for the pooled designs.
    #[arg(long, default_value_t = crows::construct::DEFAULT_STARTS)]
    pub starts: usize,
    #[arg(long, default_value_t = crows::baselines::DEFAULT_BINARIZE_LEVEL)]
    pub level: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Fail unless every output matches its recorded digest.
    #[arg(long)]
    pub check: bool,
}
