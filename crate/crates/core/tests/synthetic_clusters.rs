use wikiease_core::eval::{evaluate_scorer, Popularity};
use wikiease_core::synthetic::{generate, SyntheticConfig};
use wikiease_core::{
    align_to_vocab, fit, make_split, FeatureMatrix, FeatureMode, Metric, RawInteractions,
};

fn matrix(pairs: &[(String, String)]) -> FeatureMatrix {
    FeatureMatrix::from_pairs(
        pairs.iter().map(|(a, b)| (a.clone(), b.clone(), 1u64)),
        FeatureMode::Binary,
        1,
    )
    .unwrap()
}

#[test]
fn editor_features_recover_clusters_across_seeds() {
    for seed in 0..6u64 {
        let data = generate(&SyntheticConfig {
            seed,
            ..SyntheticConfig::default()
        });
        let editors = matrix(&data.editor_pairs);
        let categories = matrix(&data.category_pairs);
        let raw = RawInteractions::from_pairs(data.interactions.iter().cloned());
        let (interactions, _) = align_to_vocab(&raw, editors.entity_vocab()).unwrap();
        let plan = make_split(&interactions, 5, 0.8, seed).unwrap();
        let recall = |report: wikiease_core::EvalReport| report.mean(Metric::Recall, 10).unwrap();
        let e = recall(evaluate_scorer(
            &plan,
            &[10],
            &fit(&editors, 100.0).unwrap(),
        ));
        let c = recall(evaluate_scorer(
            &plan,
            &[10],
            &fit(&categories, 100.0).unwrap(),
        ));
        let p = recall(evaluate_scorer(
            &plan,
            &[10],
            &Popularity::from_history(&plan, editors.n_entities()),
        ));
        println!("seed {seed}: editor {e:.4} category {c:.4} popularity {p:.4}");
        assert!(
            e > c && e > p,
            "seed {seed}: editor {e} category {c} popularity {p}"
        );
    }
}
