//! Evaluation protocol: user folds, history/answer split, Recall@R and nDCG@R.

pub mod harness;
pub mod metrics;
pub mod rng;
pub mod split;

pub use harness::{
    evaluate, evaluate_scorer, EvalReport, Evaluation, FoldValue, LambdaReport, Metric,
    MetricSummary, Popularity, Protocol, Scorer,
};
pub use metrics::{ndcg_at_r, recall_at_r};
pub use rng::SplitRng;
pub use split::{history_size, make_split, SplitPlan, SplitSummary, UserSplit};
