use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Model selection for sequences of random objects driven by context tree
/// models.
#[derive(Debug, Parser)]
#[command(name = "seqroctm", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a stimulus chain and, optionally, responses.
    Simulate(SimulateArgs),
    /// Estimate a context tree from a sample.
    Estimate {
        #[command(subcommand)]
        method: EstimateMethod,
    },
    /// Compute the champion trees of the BIC path.
    Champions(ChampionsArgs),
    /// Select a champion tree by the smallest maximizer criterion.
    Tune(TuneArgs),
    /// Render a tree document as Graphviz DOT.
    ExportDot(ExportDotArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Tree document with the stimulus transition rows.
    #[arg(long)]
    pub tree: PathBuf,
    #[arg(long)]
    pub length: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub burn_in: usize,
    /// Tree document for categorical responses.
    #[arg(long, conflicts_with = "emitters")]
    pub response_tree: Option<PathBuf>,
    /// Emitter set for functional responses; the context tree is `--tree`.
    #[arg(long)]
    pub emitters: Option<PathBuf>,
    /// Stimulus output (stdout when omitted).
    #[arg(long)]
    pub out_x: Option<PathBuf>,
    /// Response output: a sequence file, or a CSV for functional responses.
    #[arg(long)]
    pub out_y: Option<PathBuf>,
}

/// Input files shared by the estimation commands.
#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Stimulus sequence file.
    #[arg(long)]
    pub x: PathBuf,
    /// Categorical response sequence file.
    #[arg(long, conflicts_with = "y_functional")]
    pub y: Option<PathBuf>,
    /// Functional responses, one CSV column per step.
    #[arg(long)]
    pub y_functional: Option<PathBuf>,
    /// Stimulus alphabet size (default: largest symbol + 1, at least 2).
    #[arg(long)]
    pub alphabet_size: Option<usize>,
    /// Response alphabet size (default: largest response + 1, at least 2).
    #[arg(long)]
    pub response_alphabet_size: Option<usize>,
}

/// Output files shared by the estimation commands.
#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Result document (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Human-readable report.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum EstimateMethod {
    /// BIC pruning of categorical responses.
    Bic {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        c: f64,
        /// Drop the log n factor from the penalty.
        #[arg(long)]
        no_log_n: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Pruning by the largest difference between children rows.
    Delta {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        delta: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Projective test of functional responses.
    Functional {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long)]
        height: usize,
        #[arg(long, default_value_t = 1000)]
        nbm: u64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 0.05)]
        beta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Test every leaf pair at the full level instead of alpha / pairs.
        #[arg(long)]
        no_bonferroni: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// BIC estimate of the stimulus chain alone.
    Ctm {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        alphabet_size: Option<usize>,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        c: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    /// Height of the admissible tree the chain starts from.
    #[arg(long)]
    pub height: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub c_min: f64,
    /// Upper end of the search (default: doubled until the root appears).
    #[arg(long)]
    pub c_max: Option<f64>,
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ChampionsArgs {
    #[command(flatten)]
    pub sample: SampleArgs,
    #[command(flatten)]
    pub chain: ChainArgs,
    /// Chain document (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV of index, leaves, log-likelihood and cutoff.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Bootstrap {
    None,
    Parametric,
    Blocks,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[command(flatten)]
    pub sample: SampleArgs,
    /// Champion chain from `champions`; computed from the sample when omitted.
    #[arg(long)]
    pub chain: Option<PathBuf>,
    #[command(flatten)]
    pub search: ChainArgs,
    /// Shorter resample length (default: ceil(0.3 n)).
    #[arg(long)]
    pub n1: Option<usize>,
    /// Longer resample length (default: ceil(0.9 n)).
    #[arg(long)]
    pub n2: Option<usize>,
    /// Number of bootstrap replicates.
    #[arg(long = "B", default_value_t = 200)]
    pub b: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = Bootstrap::None)]
    pub bootstrap: Bootstrap,
    /// Constant of the fitted stimulus model for `--bootstrap parametric`.
    #[arg(long, default_value_t = 1.0)]
    pub stimulus_c: f64,
    /// Renewal string for `--bootstrap blocks`, oldest symbol first, e.g. "1 1".
    #[arg(long)]
    pub renewal: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep the transition rows fitted on the full sample in every replicate.
    #[arg(long)]
    pub frozen: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExportDotArgs {
    /// Tree document.
    #[arg(long)]
    pub tree: PathBuf,
    /// Leave transition rows out of the leaf labels.
    #[arg(long)]
    pub no_probabilities: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
