use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use wikiease_core::{load_feature_pairs, FeatureMode};

fn pair_lines() -> impl Strategy<Value = Vec<(u8, u8, u8)>> {
    proptest::collection::vec((0u8..8, 0u8..10, 1u8..4), 1..60)
}

fn render(pairs: &[(u8, u8, u8)]) -> String {
    pairs
        .iter()
        .map(|(e, f, c)| format!("ent{e}\tfeat{f}\t{c}\n"))
        .collect()
}

proptest! {
    #[test]
    fn line_order_is_irrelevant(pairs in pair_lines(), min in 1usize..4, seed in any::<u64>()) {
        let mut shuffled = pairs.clone();
        // cheap deterministic shuffle
        let mut s = seed | 1;
        for i in (1..shuffled.len()).rev() {
            s ^= s << 13; s ^= s >> 7; s ^= s << 17;
            shuffled.swap(i, (s % (i as u64 + 1)) as usize);
        }
        for mode in [FeatureMode::Binary, FeatureMode::Count] {
            let a = load_feature_pairs(render(&pairs).as_bytes(), mode, min).unwrap();
            let b = load_feature_pairs(render(&shuffled).as_bytes(), mode, min).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn support_matches_surviving_pairs(pairs in pair_lines(), min in 1usize..4) {
        let fm = load_feature_pairs(render(&pairs).as_bytes(), FeatureMode::Count, min).unwrap();
        let mut support: BTreeMap<u8, BTreeSet<u8>> = BTreeMap::new();
        let mut sums: BTreeMap<(u8, u8), f64> = BTreeMap::new();
        for &(e, f, c) in &pairs {
            support.entry(f).or_default().insert(e);
            *sums.entry((e, f)).or_default() += c as f64;
        }
        let entities: BTreeSet<u8> = pairs.iter().map(|p| p.0).collect();
        prop_assert_eq!(fm.n_entities(), entities.len());
        for (i, ename) in fm.entity_vocab().iter() {
            let e: u8 = ename[3..].parse().unwrap();
            for f in 0u8..10 {
                let expected = match support.get(&f) {
                    Some(s) if s.len() >= min => sums.get(&(e, f)).copied().unwrap_or(0.0),
                    _ => 0.0,
                };
                let got = fm
                    .feature_vocab()
                    .get(&format!("feat{f}"))
                    .map(|j| fm.get(i, j))
                    .unwrap_or(0.0);
                prop_assert_eq!(got, expected);
            }
        }
    }

    #[test]
    fn binarize_is_idempotent(pairs in pair_lines()) {
        let fm = load_feature_pairs(render(&pairs).as_bytes(), FeatureMode::Count, 1).unwrap();
        let once = fm.binarize();
        prop_assert_eq!(once.binarize(), once.clone());
        let direct = load_feature_pairs(render(&pairs).as_bytes(), FeatureMode::Binary, 1).unwrap();
        prop_assert_eq!(once, direct);
    }
}
