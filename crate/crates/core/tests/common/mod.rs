#![allow(dead_code)]

use proptest::prelude::*;
use wikiease_core::{FeatureMatrix, FeatureMode, Vocab};

pub fn names(prefix: &str, n: usize) -> Vocab {
    Vocab::from_names((0..n).map(|i| format!("{prefix}{i:03}")).collect()).unwrap()
}

pub fn dense_fm(n: usize, m: usize, cells: &[bool]) -> FeatureMatrix {
    let values: Vec<f64> = cells.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    FeatureMatrix::from_dense(names("e", n), names("f", m), &values, FeatureMode::Binary).unwrap()
}

/// Binary matrices with `n` in `2..=max_n` entities and `m` in `2..=max_m` features.
pub fn binary_fm(max_n: usize, max_m: usize) -> impl Strategy<Value = FeatureMatrix> {
    (2..=max_n, 2..=max_m).prop_flat_map(|(n, m)| {
        proptest::collection::vec(proptest::bool::weighted(0.4), n * m)
            .prop_map(move |cells| dense_fm(n, m, &cells))
    })
}
