use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "landmark",
    version,
    about = "Landmark min-sum clustering from one-versus-all distance queries"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a planted or adversarial instance bundle.
    Generate(GenerateArgs),
    /// Cluster at a fixed threshold.
    Cluster(ClusterArgs),
    /// Search candidate thresholds when OPT is unknown.
    Sweep(SweepArgs),
    /// Landmark-embedding k-means baseline.
    Baseline(BaselineArgs),
    /// Compare a clustering with a reference and score it.
    Evaluate(EvaluateArgs),
    /// Check structural properties or stability of an instance bundle.
    Verify(VerifyArgs),
    /// Convert a bit-score pair file into a distance matrix.
    Ingest(IngestArgs),
}

/// How `--input` is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputFormat {
    /// Directory: instance bundle; `.tsv`: bit-score pairs; otherwise matrix CSV.
    Auto,
    Matrix,
    Pairs,
    Bundle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Json,
    /// `point,label` CSV of the clustering only.
    Labels,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SeedArg {
    /// Seed for every random choice.
    #[arg(long, env = "LANDMARK_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    pub input_format: InputFormat,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StabilityArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenerateArgs {
    /// Bundle directory to write.
    #[arg(long)]
    pub output: PathBuf,
    /// Comma-separated core sizes.
    #[arg(long, value_delimiter = ',', required_unless_present = "adversarial")]
    pub sizes: Vec<usize>,
    /// Product of cluster size and core diameter.
    #[arg(long, default_value_t = 1.0)]
    pub theta: f64,
    #[arg(long, default_value_t = 1.5)]
    pub separation_factor: f64,
    #[arg(long, default_value_t = 0.0)]
    pub bad_fraction: f64,
    #[arg(long, default_value_t = 2)]
    pub embed_dim: usize,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    /// Adversarial family instead of a planted instance.
    #[arg(long, value_parser = ["uniform", "single-outlier-cluster", "duplicate-points"])]
    pub adversarial: Option<String>,
    /// Points in an adversarial instance.
    #[arg(long, requires = "adversarial")]
    pub n: Option<usize>,
    /// Clusters in an adversarial instance.
    #[arg(long, requires = "adversarial")]
    pub k: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ClusterArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub k: usize,
    /// Threshold T for the ball test.
    #[arg(long, conflicts_with = "opt", required_unless_present = "opt")]
    pub threshold: Option<f64>,
    /// Optimum objective value; sets T = alpha OPT / (40 epsilon n).
    #[arg(long, requires_all = ["alpha", "epsilon"])]
    pub opt: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub stability: StabilityArgs,
    /// Number of landmarks n'; derived from alpha, epsilon, delta when absent.
    #[arg(long)]
    pub landmarks: Option<usize>,
    /// Give every unclustered point to the cluster of its nearest landmark.
    #[arg(long)]
    pub assign_remainder: bool,
    /// Maximum number of one-versus-all queries.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Print the number of queries issued to stderr.
    #[arg(long)]
    pub report_queries: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub k: usize,
    /// Stop once at most this many points are unclustered; derived from
    /// alpha and epsilon when absent.
    #[arg(long)]
    pub stop_bound: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub stability: StabilityArgs,
    #[arg(long)]
    pub landmarks: Option<usize>,
    /// Use a geometric candidate grid with this ratio instead of exact enumeration.
    #[arg(long)]
    pub geometric: Option<f64>,
    /// Ignore candidates above this threshold.
    #[arg(long)]
    pub max_threshold: Option<f64>,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub report_queries: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BaselineArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub k: usize,
    /// Embedding dimension d, one query per landmark.
    #[arg(long)]
    pub landmarks: usize,
    #[arg(long, default_value_t = 100)]
    pub max_iters: usize,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub report_queries: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvaluateArgs {
    /// Clustering to score: a JSON artifact, bare clustering JSON or labels CSV.
    #[arg(long)]
    pub clustering: PathBuf,
    /// Reference clustering in any of the same formats.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Distances for the objective values; a matrix, pair file or bundle.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    pub input_format: InputFormat,
    /// With a matrix and reference: classify points against the reference.
    #[command(flatten)]
    #[serde(flatten)]
    pub stability: StabilityArgs,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// Instance bundle directory.
    #[arg(long)]
    pub input: PathBuf,
    /// Defaults to the bundle's declared parameters.
    #[command(flatten)]
    #[serde(flatten)]
    pub stability: StabilityArgs,
    /// Also check stability by exhaustive enumeration.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, default_value = "balanced-k-median")]
    pub objective: String,
    /// Largest n accepted for exhaustive enumeration.
    #[arg(long, default_value_t = landmark_core::eval::DEFAULT_BRUTE_CAP)]
    pub brute_cap: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IngestArgs {
    /// Tab-separated `id_a id_b bit_score` lines.
    #[arg(long)]
    pub input: PathBuf,
    /// Matrix CSV to write.
    #[arg(long)]
    pub output: PathBuf,
    /// Where to write the identifier of each matrix row, one per line.
    #[arg(long)]
    pub ids: Option<PathBuf>,
    #[arg(long, default_value = "min-distance", value_parser = ["min-distance", "max-distance", "mean"])]
    pub symmetrize: String,
    /// Sample this many triples for the triangle check; 0 checks all.
    #[arg(long, default_value_t = 100_000)]
    pub check_triples: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArg,
}
