//! Shared fixtures for the benchmarks.

use wikiease_core::synthetic::{generate, SyntheticConfig, SyntheticData};
use wikiease_core::{align_to_vocab, FeatureMatrix, FeatureMode, InteractionSet, RawInteractions};

/// Clustered synthetic data scaled to `n_entities`, with editors and users
/// scaled proportionally to the default configuration.
pub fn dataset(n_entities: usize) -> SyntheticData {
    generate(&SyntheticConfig {
        n_entities,
        n_editors: n_entities * 3 / 2,
        n_users: n_entities * 5 / 2,
        ..SyntheticConfig::default()
    })
}

pub fn editor_matrix(data: &SyntheticData) -> FeatureMatrix {
    FeatureMatrix::from_pairs(
        data.editor_pairs
            .iter()
            .map(|(e, f)| (e.clone(), f.clone(), 1u64)),
        FeatureMode::Binary,
        1,
    )
    .expect("synthetic pairs are valid")
}

pub fn interactions(data: &SyntheticData, fm: &FeatureMatrix) -> InteractionSet {
    let raw = RawInteractions::from_pairs(data.interactions.iter().cloned());
    align_to_vocab(&raw, fm.entity_vocab()).expect("overlap").0
}
