//! Binary-relevance ranking metrics.
//!
//! ```text
//! Recall@R = |rec[..R] ∩ answer| / min(R, |answer|)
//! DCG@R    = Σ_{p=1..R} [rec[p] ∈ answer] / log2(p + 1)
//! nDCG@R   = DCG@R / Σ_{p=1..min(R, |answer|)} 1 / log2(p + 1)
//! ```

use std::collections::BTreeSet;

fn check(answer: &BTreeSet<usize>, r: usize) {
    assert!(r >= 1, "cutoff must be at least 1");
    assert!(!answer.is_empty(), "answer set must be non-empty");
}

pub fn recall_at_r(recommended: &[usize], answer: &BTreeSet<usize>, r: usize) -> f64 {
    check(answer, r);
    let hits = recommended
        .iter()
        .take(r)
        .filter(|i| answer.contains(i))
        .count();
    hits as f64 / r.min(answer.len()) as f64
}

pub fn ndcg_at_r(recommended: &[usize], answer: &BTreeSet<usize>, r: usize) -> f64 {
    check(answer, r);
    let dcg: f64 = recommended
        .iter()
        .take(r)
        .enumerate()
        .filter(|(_, i)| answer.contains(i))
        .map(|(p, _)| discount(p + 1))
        .sum();
    let idcg: f64 = (1..=r.min(answer.len())).map(discount).sum();
    dcg / idcg
}

fn discount(position: usize) -> f64 {
    1.0 / ((position + 1) as f64).log2()
}
