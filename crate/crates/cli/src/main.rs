//! `dgaclass` — train, evaluate, and run a feature-based DGA multiclass
//! classifier from the command line.
//!
//! Exit codes: 0 on success (including per-line soft failures in
//! `classify`), 1 on usage or configuration errors, 2 on internal errors.

mod cmd;
mod fileio;

use clap::{Parser, Subcommand, ValueEnum};
use dgaclass_core::forest::ForestMode;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;

/// Default seed for every randomized step.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "dgaclass",
    about = "Contextless DGA multiclass classification from domain-name features",
    version
)]
struct Cli {
    /// Seed for all randomized steps; identical seeds give byte-identical
    /// outputs.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Single forest, inherently multiclass.
    Rf,
    /// One binary forest per class.
    Ovr,
}

impl From<ModeArg> for ForestMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Rf => ForestMode::DirectMulticlass,
            ModeArg::Ovr => ForestMode::OneVsRest,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic labeled corpus.
    Gen {
        /// Output dataset CSV.
        #[arg(long)]
        out: PathBuf,
        /// Samples per family.
        #[arg(long, default_value_t = 500)]
        per_family: usize,
        /// JSON file with custom family specs (default: the five pinned
        /// families).
        #[arg(long)]
        families: Option<PathBuf>,
    },
    /// Extract feature vectors from a dataset into a CSV.
    Extract {
        #[arg(long)]
        data: PathBuf,
        /// Named selection (rfe-mdi, rfe-pi, relieff, multisurf, union,
        /// intersection, union-spearman) or a selection-report file.
        #[arg(long, default_value = "union")]
        selection: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a feature selector, or the whole selection pipeline.
    Select {
        #[arg(long)]
        data: PathBuf,
        /// variance-mi, relieff, multisurf, rfe-mdi, rfe-pi, or pipeline.
        #[arg(long, default_value = "pipeline")]
        method: String,
        /// Output directory; one report JSON per method.
        #[arg(long)]
        out_dir: PathBuf,
        /// ReliefF neighborhood size.
        #[arg(long, default_value_t = 10)]
        k_neighbors: usize,
        /// Folds for the elimination loop's cross-validated scoring.
        #[arg(long, default_value_t = 3)]
        folds: usize,
        /// Cluster count for the Spearman collapse (default: 64/76 of the
        /// union size).
        #[arg(long)]
        clusters: Option<usize>,
    },
    /// Random-search hyperparameter tuning.
    Tune {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "union")]
        selection: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Ovr)]
        mode: ModeArg,
        #[arg(long, default_value_t = dgaclass_core::tuning::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 5)]
        folds: usize,
        /// Trial log CSV.
        #[arg(long)]
        out_log: PathBuf,
        /// Winning hyperparameters JSON.
        #[arg(long)]
        out_params: PathBuf,
    },
    /// Train a forest and write the model file.
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "union")]
        selection: String,
        /// Hyperparameters JSON (default: library defaults).
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ModeArg::Ovr)]
        mode: ModeArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Repeated stratified cross-validation; writes metrics, confusion,
    /// and timing CSVs.
    Eval {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "union")]
        selection: String,
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ModeArg::Ovr)]
        mode: ModeArg,
        #[arg(long, default_value_t = 5)]
        repetitions: usize,
        #[arg(long, default_value_t = 5)]
        folds: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Classify domains (one per line) with optional explanations.
    Classify {
        #[arg(long)]
        model: PathBuf,
        /// Input file, or `-` for standard input.
        #[arg(long, default_value = "-")]
        input: String,
        /// Output file (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of attributed features per prediction; 0 disables
        /// explanations.
        #[arg(long, default_value_t = 3)]
        top_k: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Measure end-to-end classification throughput against the real-time
    /// budget.
    Bench {
        #[arg(long)]
        model: PathBuf,
        /// Dataset CSV to draw domains from (default: a generated corpus).
        #[arg(long)]
        data: Option<PathBuf>,
        /// Number of generated domains when no dataset is given.
        #[arg(long, default_value_t = 5000)]
        samples: usize,
        /// Chunk size for the parallel pass.
        #[arg(long, default_value_t = 1024)]
        batch: usize,
        /// Also measure data-parallel throughput.
        #[arg(long)]
        parallel: bool,
        /// Timing CSV (default: print to standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message; keep usage failures on exit 1.
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };

    if let Some(threads) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }

    let seed = cli.seed;
    let outcome = catch_unwind(AssertUnwindSafe(|| cmd::run(cli.command, seed)));
    match outcome {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: config: {e:#}");
            ExitCode::from(1)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            eprintln!("error: internal: {msg}");
            ExitCode::from(2)
        }
    }
}
