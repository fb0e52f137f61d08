//! Fold-wise evaluation of recommenders and mean/std aggregation.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::ease::{fit, SimilarityModel};
use crate::error::{Error, Result};
use crate::eval::metrics::{ndcg_at_r, recall_at_r};
use crate::eval::split::{make_split, SplitPlan, SplitSummary};
use crate::featurize::FeatureMatrix;
use crate::recommend::{score_user, top_r, InteractionSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Recall,
    Ndcg,
}

impl Metric {
    pub const ALL: [Metric; 2] = [Metric::Recall, Metric::Ndcg];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Recall => "recall",
            Metric::Ndcg => "ndcg",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Evaluation protocol parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Protocol {
    pub n_folds: usize,
    pub history_fraction: f64,
    pub seed: u64,
    pub cutoffs: Vec<usize>,
}

impl Default for Protocol {
    fn default() -> Self {
        Self {
            n_folds: 5,
            history_fraction: 0.8,
            seed: 0,
            cutoffs: vec![5, 10, 20, 50],
        }
    }
}

impl Protocol {
    /// Cutoffs sorted and deduplicated; errors on an empty list or a zero.
    pub fn normalized_cutoffs(&self) -> Result<Vec<usize>> {
        let mut cutoffs = self.cutoffs.clone();
        cutoffs.sort_unstable();
        cutoffs.dedup();
        match cutoffs.first() {
            None => Err(Error::InvalidArgument(
                "at least one cutoff is required".into(),
            )),
            Some(0) => Err(Error::InvalidArgument("cutoffs must be at least 1".into())),
            Some(_) => Ok(cutoffs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldValue {
    pub fold: usize,
    pub metric: Metric,
    pub r: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricSummary {
    pub metric: Metric,
    pub r: usize,
    pub mean: f64,
    /// Population standard deviation over folds.
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub cutoffs: Vec<usize>,
    pub n_folds: usize,
    pub fold_sizes: Vec<usize>,
    pub per_fold: Vec<FoldValue>,
    pub summary: Vec<MetricSummary>,
}

impl EvalReport {
    pub fn fold_value(&self, fold: usize, metric: Metric, r: usize) -> Option<f64> {
        self.per_fold
            .iter()
            .find(|v| v.fold == fold && v.metric == metric && v.r == r)
            .map(|v| v.value)
    }

    fn summary_for(&self, metric: Metric, r: usize) -> Option<&MetricSummary> {
        self.summary.iter().find(|s| s.metric == metric && s.r == r)
    }

    pub fn mean(&self, metric: Metric, r: usize) -> Option<f64> {
        self.summary_for(metric, r).map(|s| s.mean)
    }

    pub fn std(&self, metric: Metric, r: usize) -> Option<f64> {
        self.summary_for(metric, r).map(|s| s.std)
    }
}

/// Scores for every entity given a user's history.
pub trait Scorer: Sync {
    fn scores(&self, history: &BTreeSet<usize>) -> Vec<f64>;
}

impl Scorer for SimilarityModel {
    fn scores(&self, history: &BTreeSet<usize>) -> Vec<f64> {
        score_user(history, self)
    }
}

/// Non-personalized ranking by interaction count in the history parts.
#[derive(Debug, Clone, PartialEq)]
pub struct Popularity {
    counts: Vec<f64>,
}

impl Popularity {
    pub fn from_history(plan: &SplitPlan, n_entities: usize) -> Self {
        let mut counts = vec![0.0; n_entities];
        for part in plan.parts.values() {
            for &i in &part.history {
                counts[i] += 1.0;
            }
        }
        Self { counts }
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }
}

impl Scorer for Popularity {
    fn scores(&self, _history: &BTreeSet<usize>) -> Vec<f64> {
        self.counts.clone()
    }
}

/// Runs every user of every fold through `scorer`, masks history, and
/// scores the top-R lists against the answer sets.
///
/// Per-fold values are unweighted means over the fold's users, summed in
/// ascending user-name order; mean and std run over folds in index order.
pub fn evaluate_scorer<S: Scorer>(plan: &SplitPlan, cutoffs: &[usize], scorer: &S) -> EvalReport {
    let max_r = cutoffs.iter().copied().max().unwrap_or(0);
    let per_user_len = Metric::ALL.len() * cutoffs.len();
    let mut per_fold = Vec::new();
    let mut fold_means = vec![vec![0.0; per_user_len]; plan.n_folds];

    for (fold, means) in fold_means.iter_mut().enumerate() {
        let users = plan.fold_users(fold);
        let rows: Vec<Vec<f64>> = users
            .par_iter()
            .map(|user| {
                let part = &plan.parts[*user];
                let scores = scorer.scores(&part.history);
                let ranked = top_r(&scores, &part.history, max_r);
                let mut row = Vec::with_capacity(per_user_len);
                for metric in Metric::ALL {
                    for &r in cutoffs {
                        row.push(match metric {
                            Metric::Recall => recall_at_r(&ranked, &part.answer, r),
                            Metric::Ndcg => ndcg_at_r(&ranked, &part.answer, r),
                        });
                    }
                }
                row
            })
            .collect();
        for row in &rows {
            for (m, v) in means.iter_mut().zip(row) {
                *m += v;
            }
        }
        let count = rows.len().max(1) as f64;
        for m in means.iter_mut() {
            *m /= count;
        }
        for (mi, metric) in Metric::ALL.into_iter().enumerate() {
            for (ri, &r) in cutoffs.iter().enumerate() {
                per_fold.push(FoldValue {
                    fold,
                    metric,
                    r,
                    value: means[mi * cutoffs.len() + ri],
                });
            }
        }
    }

    let k = plan.n_folds as f64;
    let mut summary = Vec::new();
    for (mi, metric) in Metric::ALL.into_iter().enumerate() {
        for (ri, &r) in cutoffs.iter().enumerate() {
            let col = mi * cutoffs.len() + ri;
            let mean = fold_means.iter().map(|f| f[col]).sum::<f64>() / k;
            let var = fold_means
                .iter()
                .map(|f| (f[col] - mean).powi(2))
                .sum::<f64>()
                / k;
            summary.push(MetricSummary {
                metric,
                r,
                mean,
                std: var.sqrt(),
            });
        }
    }

    EvalReport {
        cutoffs: cutoffs.to_vec(),
        n_folds: plan.n_folds,
        fold_sizes: plan.fold_sizes(),
        per_fold,
        summary,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaReport {
    pub lambda: f64,
    pub report: EvalReport,
}

/// Everything one protocol run produces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub split: SplitSummary,
    pub models: Vec<LambdaReport>,
    pub popularity: EvalReport,
}

/// Fits one model per λ on the full feature matrix and evaluates each on
/// the same split, alongside the popularity baseline.
///
/// `interactions` must be aligned to `fm`'s entity vocabulary.
pub fn evaluate(
    fm: &FeatureMatrix,
    interactions: &InteractionSet,
    lambdas: &[f64],
    protocol: &Protocol,
) -> Result<Evaluation> {
    if lambdas.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one lambda is required".into(),
        ));
    }
    if interactions.entity_vocab() != fm.entity_vocab() {
        return Err(Error::InvalidArgument(
            "interactions are not aligned to the feature matrix vocabulary".into(),
        ));
    }
    let cutoffs = protocol.normalized_cutoffs()?;
    let plan = make_split(
        interactions,
        protocol.n_folds,
        protocol.history_fraction,
        protocol.seed,
    )?;

    let models = lambdas
        .iter()
        .map(|&lambda| {
            let model = fit(fm, lambda)?;
            Ok(LambdaReport {
                lambda,
                report: evaluate_scorer(&plan, &cutoffs, &model),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let popularity = evaluate_scorer(
        &plan,
        &cutoffs,
        &Popularity::from_history(&plan, fm.n_entities()),
    );

    Ok(Evaluation {
        split: plan.summary(),
        models,
        popularity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::featurize::FeatureMode;
    use crate::recommend::align_to_vocab;
    use crate::recommend::RawInteractions;
    use std::collections::BTreeMap;

    fn plan_with(parts: &[(&str, usize, &[usize], &[usize])], n_folds: usize) -> SplitPlan {
        let mut fold_of_user = BTreeMap::new();
        let mut p = BTreeMap::new();
        for &(u, f, h, a) in parts {
            fold_of_user.insert(u.to_string(), f);
            p.insert(
                u.to_string(),
                crate::eval::split::UserSplit {
                    history: h.iter().copied().collect(),
                    answer: a.iter().copied().collect(),
                },
            );
        }
        SplitPlan {
            seed: 0,
            n_folds,
            history_fraction: 0.8,
            fold_of_user,
            parts: p,
            excluded_users: vec![],
        }
    }

    #[test]
    fn identical_pair_single_user() {
        let fm = FeatureMatrix::from_pairs(
            [
                ("e1", "u1", 1),
                ("e1", "u2", 1),
                ("e2", "u1", 1),
                ("e2", "u2", 1),
            ],
            FeatureMode::Binary,
            1,
        )
        .unwrap();
        let model = fit(&fm, 2.0).unwrap();
        let plan = plan_with(&[("a", 0, &[0], &[1]), ("b", 1, &[0], &[1])], 2);
        let report = evaluate_scorer(&plan, &[1], &model);
        assert_eq!(report.fold_value(0, Metric::Recall, 1), Some(1.0));
        assert_eq!(report.fold_value(0, Metric::Ndcg, 1), Some(1.0));
        assert_eq!(report.mean(Metric::Ndcg, 1), Some(1.0));
        assert_eq!(report.std(Metric::Recall, 1), Some(0.0));
    }

    #[test]
    fn mean_and_population_std() {
        // fold 0 hits, fold 1 misses: mean 0.5, population std 0.5
        let zero = SimilarityModel::from_parts(
            crate::linalg::SquareMatrix::zeros(4),
            crate::vocab::Vocab::sorted(["a", "b", "c", "d"]).unwrap(),
            None,
        )
        .unwrap();
        let plan = plan_with(&[("x", 0, &[3], &[0]), ("y", 1, &[0], &[3])], 2);
        let report = evaluate_scorer(&plan, &[1], &zero);
        assert_eq!(report.fold_value(0, Metric::Recall, 1), Some(1.0));
        assert_eq!(report.fold_value(1, Metric::Recall, 1), Some(0.0));
        assert_eq!(report.mean(Metric::Recall, 1), Some(0.5));
        assert_eq!(report.std(Metric::Recall, 1), Some(0.5));
    }

    #[test]
    fn popularity_counts_history_only() {
        let plan = plan_with(&[("x", 0, &[1, 2], &[0]), ("y", 1, &[2], &[3])], 2);
        let pop = Popularity::from_history(&plan, 4);
        assert_eq!(pop.counts(), &[0.0, 1.0, 2.0, 0.0]);
    }

    #[test]
    fn evaluate_checks_alignment_and_lambdas() {
        let fm = FeatureMatrix::from_pairs([("a", "x", 1), ("b", "x", 1)], FeatureMode::Binary, 1)
            .unwrap();
        let other = crate::vocab::Vocab::sorted(["a", "b", "c"]).unwrap();
        let raw = RawInteractions::from_pairs([("u", "a"), ("u", "b")]);
        let (mismatched, _) = align_to_vocab(&raw, &other).unwrap();
        assert!(evaluate(&fm, &mismatched, &[1.0], &Protocol::default()).is_err());
        let (aligned, _) = align_to_vocab(&raw, fm.entity_vocab()).unwrap();
        assert!(evaluate(&fm, &aligned, &[], &Protocol::default()).is_err());
    }

    #[test]
    fn cutoffs_normalize() {
        let p = Protocol {
            cutoffs: vec![10, 5, 10],
            ..Protocol::default()
        };
        assert_eq!(p.normalized_cutoffs().unwrap(), vec![5, 10]);
        let p = Protocol {
            cutoffs: vec![0],
            ..Protocol::default()
        };
        assert!(p.normalized_cutoffs().is_err());
    }
}
