use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "textlier", version, about = "Outlier document detection with a convolutional autoencoder")]
pub struct Cli {
    #[command(flatten)]
    pub shared: SharedArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct SharedArgs {
    /// Run seed; every stage derives its own seed from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// JSON file with run settings.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory receiving all outputs.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, global = true)]
    pub max_sent: Option<usize>,
    #[arg(long, global = true)]
    pub embed_dim: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Provider {
    /// Signed feature hashing of sentence tokens.
    Hash,
    /// Validate and normalise an existing embedding file.
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PartitionArg {
    Train,
    Validation,
    Test,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaselineArg {
    Mahalanobis,
    Pca,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Turn raw corpora into an embedding file.
    Embed {
        #[arg(long = "input", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "hash")]
        provider: Provider,
        #[arg(long, default_value = "embeddings.jsonl")]
        output: PathBuf,
    },
    /// Mix documents sampled from an outlier pool into a normal corpus.
    Inject {
        #[arg(long)]
        normal: PathBuf,
        #[arg(long)]
        outliers: PathBuf,
        /// Number of outliers to inject (default from the run config).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "corpus.jsonl")]
        output: PathBuf,
    },
    /// Write the train, validation and test partitions of an embedding file.
    Split {
        #[arg(long)]
        embeddings: PathBuf,
    },
    /// Train the autoencoder and classifier and write a checkpoint.
    Train {
        #[arg(long)]
        embeddings: PathBuf,
        #[arg(long, default_value = "model.ckpt")]
        output: PathBuf,
        #[command(flatten)]
        tuning: TrainTuning,
    },
    /// Score every document with a trained checkpoint.
    Score {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long)]
        embeddings: PathBuf,
        #[arg(long, default_value = "scores.jsonl")]
        output: PathBuf,
    },
    /// Evaluate a checkpoint on one partition of the file it was trained on.
    Eval {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long)]
        embeddings: PathBuf,
        #[arg(long, value_enum, default_value = "validation")]
        partition: PartitionArg,
        /// Report file stem; `.json` and `.txt` are appended.
        #[arg(long, default_value = "report")]
        output: String,
    },
    /// Fit a classical baseline and report it on one partition.
    Baseline {
        #[arg(long, value_enum)]
        scorer: BaselineArg,
        #[arg(long)]
        embeddings: PathBuf,
        #[arg(long, value_enum, default_value = "validation")]
        partition: PartitionArg,
        /// Output file stem (default `baseline-<scorer>`).
        #[arg(long)]
        output: Option<String>,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct TrainTuning {
    /// Autoencoder epochs.
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub latent_dim: Option<usize>,
    /// Autoencoder Adam learning rate.
    #[arg(long)]
    pub learning_rate: Option<f64>,
    /// Ignore padding rows in the reconstruction loss.
    #[arg(long)]
    pub masked_loss: bool,
    /// L2 penalty of the logistic regression.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Logistic regression epochs.
    #[arg(long)]
    pub classifier_epochs: Option<usize>,
}
