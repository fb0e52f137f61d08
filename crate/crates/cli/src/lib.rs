//! Command-line front end for wikiease.

pub mod commands;
pub mod config;
pub mod format;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use wikiease_core::FeatureMode;

use crate::config::PartialConfig;

#[derive(Debug, Parser)]
#[command(
    name = "wikiease",
    version,
    about = "Entity similarity from entity-feature pairs, with an implicit-feedback evaluation harness"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a similarity model from a feature pair file and save it.
    Fit(FitArgs),
    /// List the entities most similar to one entity.
    Similar(SimilarArgs),
    /// Recommend entities for every user of an interaction file.
    Recommend(RecommendArgs),
    /// Run the fold-wise evaluation protocol for one or more lambdas.
    Evaluate(RunArgs),
    /// Print a model file's header and weight statistics.
    Inspect(InspectArgs),
}

/// Flags shared by `fit` and `evaluate`; each overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// TOML file with RunConfig fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Entity-feature pair file.
    #[arg(long)]
    pub features: Option<PathBuf>,
    /// User-entity interaction file.
    #[arg(long)]
    pub interactions: Option<PathBuf>,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<FeatureMode>,
    #[arg(long)]
    pub min_feature_count: Option<usize>,
    /// Regularization strength; repeat for a grid.
    #[arg(long = "lambda")]
    pub lambdas: Vec<f64>,
    /// Comma-separated list of R values.
    #[arg(long, value_delimiter = ',')]
    pub cutoffs: Vec<usize>,
    #[arg(long)]
    pub folds: Option<usize>,
    #[arg(long)]
    pub history_fraction: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub rating_threshold: Option<f64>,
    /// Output path (model file for `fit`, TSV for `evaluate`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON report path (`evaluate`).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<FeatureMode, String> {
    s.parse().map_err(|e: wikiease_core::Error| e.to_string())
}

impl RunArgs {
    pub fn as_layer(&self) -> PartialConfig {
        PartialConfig {
            feature_path: self.features.clone(),
            interaction_path: self.interactions.clone(),
            mode: self.mode,
            min_feature_count: self.min_feature_count,
            lambdas: (!self.lambdas.is_empty()).then(|| self.lambdas.clone()),
            cutoffs: (!self.cutoffs.is_empty()).then(|| self.cutoffs.clone()),
            n_folds: self.folds,
            history_fraction: self.history_fraction,
            seed: self.seed,
            rating_threshold: self.rating_threshold,
            out: self.out.clone(),
            report: self.report.clone(),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Zero weights with absolute value below this (lossy).
    #[arg(long)]
    pub prune_below: Option<f64>,
    /// Also write the loaded feature matrix as `entity<TAB>feature<TAB>value`.
    #[arg(long)]
    pub dump_features: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimilarArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub entity: String,
    #[arg(short, long, default_value_t = 10)]
    pub k: usize,
}

#[derive(Debug, Clone, Args)]
pub struct RecommendArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub interactions: PathBuf,
    #[arg(long, default_value_t = wikiease_core::DEFAULT_RATING_THRESHOLD)]
    pub rating_threshold: f64,
    /// Recommendations per user.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct InspectArgs {
    #[arg(long)]
    pub model: PathBuf,
}

/// Runs one parsed command, writing human-facing output to `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> anyhow::Result<()> {
    match cli.command {
        Command::Fit(args) => commands::cmd_fit(&args, stdout),
        Command::Similar(args) => commands::cmd_similar(&args, stdout),
        Command::Recommend(args) => commands::cmd_recommend(&args, stdout),
        Command::Evaluate(args) => commands::cmd_evaluate(&args, stdout),
        Command::Inspect(args) => commands::cmd_inspect(&args, stdout),
    }
}
