//! `resume-fusion` command line.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "resume-fusion", version, about = "Ensemble resume parsing with weighted field voting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic JSONL corpus and its metadata sidecar.
    Synth(SynthArgs),
    /// Extract with a backend panel and aggregate per document.
    Parse(ParseArgs),
    /// Score prediction files against a gold corpus.
    Evaluate(EvaluateArgs),
    /// Grid-search vote weights on a validation split.
    Calibrate(CalibrateArgs),
}

#[derive(clap::Args)]
struct SynthArgs {
    /// Number of resumes.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output corpus (JSONL).
    #[arg(long)]
    out: PathBuf,
    /// Metadata sidecar; defaults to `<out>.meta.json`.
    #[arg(long)]
    meta: Option<PathBuf>,
    /// Probability of rendering a date in a non-ISO format.
    #[arg(long)]
    date_variation: Option<f64>,
    /// Probability of rendering a skill as an ontology synonym.
    #[arg(long)]
    synonym_rate: Option<f64>,
    /// Probability of omitting each of email, phone and department.
    #[arg(long)]
    omission_rate: Option<f64>,
    /// Probability that a resume is an edge case.
    #[arg(long)]
    edge_case_rate: Option<f64>,
    /// Set every noise rate to zero.
    #[arg(long)]
    noiseless: bool,
}

#[derive(clap::Args)]
struct ParseArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Panel config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// `model=weight,...`, a JSON object, a path to one, or `calibrate`.
    #[arg(long)]
    weights: String,
    /// Aggregated resumes (JSONL).
    #[arg(long)]
    out: PathBuf,
    /// Per-document vote trail (JSONL).
    #[arg(long)]
    audit: Option<PathBuf>,
    #[arg(long)]
    ontology: Option<PathBuf>,
    /// Grid for `--weights calibrate`; defaults to {1,2,3} per model.
    #[arg(long)]
    grid: Option<PathBuf>,
    #[arg(long)]
    rs_weights: Option<PathBuf>,
    /// Worker threads; output does not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    parallelism: Option<u64>,
    /// Offsets every mock seed and seeds the calibration split.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(clap::Args)]
struct EvaluateArgs {
    /// Prediction file(s); one column per file.
    #[arg(long, required = true)]
    pred: Vec<PathBuf>,
    /// Gold corpus (JSONL).
    #[arg(long)]
    gold: PathBuf,
    #[arg(long)]
    rs_weights: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    #[arg(long)]
    ontology: Option<PathBuf>,
}

#[derive(clap::Args)]
struct CalibrateArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    config: PathBuf,
    /// JSON array of weight objects; defaults to {1,2,3} per model.
    #[arg(long)]
    grid: Option<PathBuf>,
    /// Calibration result (JSON).
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    rs_weights: Option<PathBuf>,
    #[arg(long)]
    ontology: Option<PathBuf>,
    /// Use the whole corpus as validation data instead of splitting it.
    #[arg(long)]
    no_split: bool,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    parallelism: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(a) => commands::synth(a),
        Command::Parse(a) => commands::parse(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Calibrate(a) => commands::calibrate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
