//! Run configuration: defaults, then a TOML config file, then command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use wikiease_core::{FeatureMode, DEFAULT_LAMBDA, DEFAULT_RATING_THRESHOLD};

/// Fully resolved configuration; echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub feature_path: Option<PathBuf>,
    pub interaction_path: Option<PathBuf>,
    pub mode: FeatureMode,
    pub min_feature_count: usize,
    pub lambdas: Vec<f64>,
    pub cutoffs: Vec<usize>,
    pub n_folds: usize,
    pub history_fraction: f64,
    pub seed: u64,
    pub rating_threshold: f64,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            feature_path: None,
            interaction_path: None,
            mode: FeatureMode::Binary,
            min_feature_count: 1,
            lambdas: vec![DEFAULT_LAMBDA],
            cutoffs: vec![5, 10, 20, 50],
            n_folds: 5,
            history_fraction: 0.8,
            seed: 0,
            rating_threshold: DEFAULT_RATING_THRESHOLD,
            out: None,
            report: None,
        }
    }
}

/// Any subset of [`RunConfig`], as read from a file or the command line.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub feature_path: Option<PathBuf>,
    pub interaction_path: Option<PathBuf>,
    pub mode: Option<FeatureMode>,
    pub min_feature_count: Option<usize>,
    pub lambdas: Option<Vec<f64>>,
    pub cutoffs: Option<Vec<usize>>,
    pub n_folds: Option<usize>,
    pub history_fraction: Option<f64>,
    pub seed: Option<u64>,
    pub rating_threshold: Option<f64>,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

impl PartialConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

macro_rules! overlay {
    ($base:expr, $layer:expr, [$($field:ident),*]) => {
        $( if let Some(v) = $layer.$field { $base.$field = v; } )*
    };
}

macro_rules! overlay_opt {
    ($base:expr, $layer:expr, [$($field:ident),*]) => {
        $( if $layer.$field.is_some() { $base.$field = $layer.$field; } )*
    };
}

impl RunConfig {
    /// Applies `layers` in order over the defaults; later layers win.
    pub fn resolve<I: IntoIterator<Item = PartialConfig>>(layers: I) -> Result<Self> {
        let mut cfg = Self::default();
        for layer in layers {
            overlay_opt!(cfg, layer, [feature_path, interaction_path, out, report]);
            overlay!(
                cfg,
                layer,
                [
                    mode,
                    min_feature_count,
                    lambdas,
                    cutoffs,
                    n_folds,
                    history_fraction,
                    seed,
                    rating_threshold
                ]
            );
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_feature_count == 0 {
            bail!("invalid argument: min_feature_count must be at least 1");
        }
        if self.lambdas.is_empty() {
            bail!("invalid argument: at least one lambda is required");
        }
        if let Some(l) = self.lambdas.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
            bail!("invalid argument: lambda must be a positive finite number, got {l}");
        }
        if self.cutoffs.is_empty() || self.cutoffs.contains(&0) {
            bail!("invalid argument: cutoffs must be a non-empty list of positive integers");
        }
        if self.n_folds < 2 {
            bail!(
                "invalid argument: folds must be at least 2, got {}",
                self.n_folds
            );
        }
        if !(self.history_fraction > 0.0 && self.history_fraction < 1.0) {
            bail!(
                "invalid argument: history fraction must be in (0, 1), got {}",
                self.history_fraction
            );
        }
        if !self.rating_threshold.is_finite() {
            bail!("invalid argument: rating threshold must be finite");
        }
        Ok(())
    }

    pub fn require_features(&self) -> Result<&Path> {
        self.feature_path
            .as_deref()
            .context("a feature file is required (--features or feature_path)")
    }

    pub fn require_interactions(&self) -> Result<&Path> {
        self.interaction_path
            .as_deref()
            .context("an interaction file is required (--interactions or interaction_path)")
    }
}
