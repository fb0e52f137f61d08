//! Entity-entity similarity from binary entity-feature matrices.
//!
//! Features (editors, links, categories, n-grams) are loaded into a sparse
//! [`FeatureMatrix`]; [`fit`] solves the zero-diagonal ridge regression
//! (EASE) in closed form to give a dense [`SimilarityModel`]; the [`eval`]
//! module measures how well `x_u·B` recommendations recover held-out
//! user preferences.

pub mod ease;
pub mod error;
pub mod eval;
pub mod featurize;
pub mod linalg;
pub mod oracle;
pub mod persist;
pub mod ranking;
pub mod recommend;
pub mod synthetic;
pub mod vocab;

pub use ease::{entity_gram, fit, SimilarityModel, DEFAULT_LAMBDA};
pub use error::{Error, Result};
pub use eval::{
    evaluate, make_split, ndcg_at_r, recall_at_r, EvalReport, Evaluation, Metric, Protocol,
    SplitPlan,
};
pub use featurize::{load_feature_pairs, FeatureMatrix, FeatureMode};
pub use linalg::SquareMatrix;
pub use persist::{read_model, write_model};
pub use recommend::{
    align, align_to_vocab, load_interactions, score_user, top_r, AlignStats, InteractionSet,
    RawInteractions, DEFAULT_RATING_THRESHOLD,
};
pub use vocab::Vocab;
