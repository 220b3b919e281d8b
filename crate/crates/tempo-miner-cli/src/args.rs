use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "tempo-miner",
    about = "Frequent temporal pattern mining over multivariate time series",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Symbolize a raw CSV and split it into the sequence database
    Transform(TransformArgs),
    /// Mine frequent temporal patterns from a CSV or a sequence file
    Mine(MineArgs),
    /// Compare two pattern files and report the recovered fraction
    Compare(CompareArgs),
    /// Tabulate the confidence lower bound over a parameter grid
    Bound(BoundArgs),
    /// Generate a seeded synthetic symbolic CSV
    Generate(GenerateArgs),
    /// Export the NMI correlation graph of a symbolic CSV
    MiGraph(MiGraphArgs),
}

/// Flags shared by ingestion paths. Flags win over config-file values.
#[derive(Args, Clone)]
pub struct IngestOpts {
    /// JSON config file; any flag given on the command line overrides it
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Mapper kind: threshold, quantile, or passthrough
    #[arg(long)]
    pub mapper: Option<String>,
    /// Ascending thresholds, comma separated (threshold mapper)
    #[arg(long, value_delimiter = ',')]
    pub thresholds: Option<Vec<f64>>,
    /// Bin labels, comma separated, lowest bin first
    #[arg(long, value_delimiter = ',')]
    pub labels: Option<Vec<String>>,
    /// Number of quantile bins (quantile mapper)
    #[arg(long)]
    pub bins: Option<usize>,
    /// Window length in grid units
    #[arg(long)]
    pub window: Option<u64>,
    /// Overlap between consecutive windows in grid units
    #[arg(long)]
    pub overlap: Option<u64>,
}

#[derive(Args)]
pub struct TransformArgs {
    /// Input CSV (numeric, or symbolic with the passthrough mapper)
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub ingest: IngestOpts,
    /// Tolerance buffer used for the clipped-fragment drop rule
    #[arg(long)]
    pub epsilon: Option<u64>,
    /// Where to write the symbolic CSV
    #[arg(long)]
    pub out_symbolic: PathBuf,
    /// Where to write the sequence-database JSON
    #[arg(long)]
    pub out_sequences: PathBuf,
}

#[derive(Args)]
pub struct MineArgs {
    /// Sequence-database JSON (.json) or CSV input
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub ingest: IngestOpts,
    /// exact or approx (approx needs a symbolic source, i.e. CSV input)
    #[arg(long)]
    pub mode: Option<String>,
    /// Relative support threshold in (0,1]
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Confidence threshold in (0,1]
    #[arg(long)]
    pub delta: Option<f64>,
    /// Tolerance buffer in grid units
    #[arg(long)]
    pub epsilon: Option<u64>,
    /// Minimal overlap duration in grid units (must exceed 2*epsilon)
    #[arg(long)]
    pub min_overlap: Option<u64>,
    /// Maximal pattern span in grid units (default: longest window)
    #[arg(long)]
    pub t_max: Option<u64>,
    /// Largest pattern size to mine
    #[arg(long)]
    pub k_max: Option<usize>,
    /// none, apriori, trans, or all
    #[arg(long)]
    pub prune: Option<String>,
    /// NMI threshold override for approx mode; derived from sigma and
    /// delta when absent
    #[arg(long)]
    pub mu: Option<f64>,
    /// Worker threads (env TEMPO_MINER_THREADS; default 1, sequential)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Where to write the patterns (one JSON record per line)
    #[arg(long)]
    pub out: PathBuf,
    /// Write the run summary JSON here instead of stdout
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Args)]
pub struct CompareArgs {
    /// Reference pattern file
    #[arg(long)]
    pub reference: PathBuf,
    /// Candidate pattern file
    #[arg(long)]
    pub candidate: PathBuf,
}

#[derive(Args)]
pub struct BoundArgs {
    /// Support values: a single number or start:end:count
    #[arg(long)]
    pub sigma: String,
    /// NMI values: a single number or start:end:count
    #[arg(long, name = "mu-grid")]
    pub mu_grid: String,
    /// Alphabet size of the bounded side
    #[arg(long)]
    pub nx: usize,
    /// Smallest marginal probability, in (0,1)
    #[arg(long)]
    pub lambda1: f64,
    /// Joint probability of the minimizing complement cell, in [0,1)
    #[arg(long)]
    pub lambda2: f64,
    /// Output CSV path (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct GenerateArgs {
    /// Generator spec JSON
    #[arg(long)]
    pub spec: PathBuf,
    /// Override the spec's seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output CSV path (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct MiGraphArgs {
    /// Symbolic CSV input
    #[arg(long)]
    pub input: PathBuf,
    /// NMI threshold override; derived from sigma and delta when absent
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// json or dot
    #[arg(long, default_value = "json")]
    pub format: String,
    /// Output path (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
}
