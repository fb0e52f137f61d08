use std::cmp::Ordering;

/// Descending by score, ascending by index on ties. NaN ranks last;
/// `-0.0` and `0.0` tie.
fn by_score_then_index(scores: &[f64]) -> impl Fn(&usize, &usize) -> Ordering + '_ {
    move |&a, &b| {
        let (sa, sb) = (scores[a], scores[b]);
        match (sa.is_nan(), sb.is_nan()) {
            (false, false) => sb.partial_cmp(&sa).unwrap_or(Ordering::Equal),
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (true, true) => Ordering::Equal,
        }
        .then(a.cmp(&b))
    }
}

/// Indices of the `k` best scores among those not `excluded`, best first.
pub fn top_k<F>(scores: &[f64], k: usize, excluded: F) -> Vec<usize>
where
    F: Fn(usize) -> bool,
{
    let mut candidates: Vec<usize> = (0..scores.len()).filter(|&i| !excluded(i)).collect();
    if k == 0 {
        return Vec::new();
    }
    let cmp = by_score_then_index(scores);
    if k < candidates.len() {
        candidates.select_nth_unstable_by(k - 1, &cmp);
        candidates.truncate(k);
    }
    candidates.sort_unstable_by(&cmp);
    candidates
}
