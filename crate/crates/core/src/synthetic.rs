//! Seeded synthetic data with latent entity clusters.
//!
//! Editors edit mostly within one cluster, categories ignore clusters, and
//! users prefer one cluster with a within-cluster popularity skew. Editor
//! features should therefore recover the structure users care about while
//! category features should not.

use std::collections::BTreeSet;
use std::io::Write;

use crate::eval::SplitRng;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub n_entities: usize,
    pub n_clusters: usize,
    pub n_editors: usize,
    pub edits_per_editor: usize,
    /// Probability that an edit lands in the editor's home cluster.
    pub editor_cluster_affinity: f64,
    pub n_categories: usize,
    pub categories_per_entity: usize,
    pub n_users: usize,
    pub items_per_user: usize,
    /// Probability that a user interaction lands in the preferred cluster.
    pub user_cluster_affinity: f64,
    /// Zipf exponent of within-cluster entity popularity for users.
    pub popularity_exponent: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            n_entities: 200,
            n_clusters: 2,
            n_editors: 300,
            edits_per_editor: 12,
            editor_cluster_affinity: 0.9,
            n_categories: 30,
            categories_per_entity: 2,
            n_users: 500,
            items_per_user: 20,
            user_cluster_affinity: 0.9,
            popularity_exponent: 0.0,
            seed: 2022,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    pub entities: Vec<String>,
    pub cluster_of_entity: Vec<usize>,
    pub editor_pairs: Vec<(String, String)>,
    pub category_pairs: Vec<(String, String)>,
    pub interactions: Vec<(String, String)>,
}

fn weighted_pick(rng: &mut SplitRng, cumulative: &[f64]) -> usize {
    let total = *cumulative.last().expect("non-empty weights");
    let x = rng.unit() * total;
    cumulative
        .partition_point(|&c| c <= x)
        .min(cumulative.len() - 1)
}

fn pick_cluster(rng: &mut SplitRng, home: usize, affinity: f64, n_clusters: usize) -> usize {
    if n_clusters == 1 || rng.unit() < affinity {
        home
    } else {
        let other = rng.below(n_clusters - 1);
        if other >= home {
            other + 1
        } else {
            other
        }
    }
}

/// Entity `i` belongs to cluster `i % n_clusters` and has within-cluster
/// popularity rank `i / n_clusters`.
pub fn generate(config: &SyntheticConfig) -> SyntheticData {
    let c = config.n_clusters.max(1);
    let mut rng = SplitRng::new(config.seed);
    let entities: Vec<String> = (0..config.n_entities)
        .map(|i| format!("ent{i:05}"))
        .collect();
    let cluster_of_entity: Vec<usize> = (0..config.n_entities).map(|i| i % c).collect();
    let members: Vec<Vec<usize>> = (0..c)
        .map(|k| (0..config.n_entities).filter(|i| i % c == k).collect())
        .collect();

    let mut edits: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut edited = vec![false; config.n_entities];
    let homes: Vec<usize> = (0..config.n_editors).map(|_| rng.below(c)).collect();
    for (editor, &home) in homes.iter().enumerate() {
        for _ in 0..config.edits_per_editor {
            let cluster = pick_cluster(&mut rng, home, config.editor_cluster_affinity, c);
            let pool = &members[cluster];
            if pool.is_empty() {
                continue;
            }
            let e = pool[rng.below(pool.len())];
            edits.insert((editor, e));
            edited[e] = true;
        }
    }
    // every entity gets at least one editor from its own cluster
    for (e, _) in edited.iter().enumerate().filter(|(_, &d)| !d) {
        let local: Vec<usize> = (0..config.n_editors)
            .filter(|&ed| homes[ed] == cluster_of_entity[e])
            .collect();
        if !local.is_empty() {
            edits.insert((local[rng.below(local.len())], e));
        }
    }
    let mut editor_pairs: Vec<(String, String)> = edits
        .into_iter()
        .map(|(ed, e)| (entities[e].clone(), format!("editor{ed:05}")))
        .collect();
    editor_pairs.sort();

    let mut category_pairs = Vec::new();
    for entity in &entities {
        let mut cats = BTreeSet::new();
        while cats.len() < config.categories_per_entity.min(config.n_categories) {
            cats.insert(rng.below(config.n_categories));
        }
        for cat in cats {
            category_pairs.push((entity.clone(), format!("cat{cat:03}")));
        }
    }

    let cumulative: Vec<Vec<f64>> = members
        .iter()
        .map(|pool| {
            let mut acc = 0.0;
            (0..pool.len())
                .map(|rank| {
                    acc += 1.0 / ((rank + 1) as f64).powf(config.popularity_exponent);
                    acc
                })
                .collect()
        })
        .collect();
    let mut interactions = Vec::new();
    for u in 0..config.n_users {
        let user = format!("user{u:05}");
        let home = rng.below(c);
        let mut chosen = BTreeSet::new();
        let target = config.items_per_user.min(config.n_entities);
        let mut attempts = 0;
        while chosen.len() < target && attempts < 100 * target {
            attempts += 1;
            let cluster = pick_cluster(&mut rng, home, config.user_cluster_affinity, c);
            if members[cluster].is_empty() {
                continue;
            }
            chosen.insert(members[cluster][weighted_pick(&mut rng, &cumulative[cluster])]);
        }
        for e in chosen {
            interactions.push((user.clone(), entities[e].clone()));
        }
    }

    SyntheticData {
        entities,
        cluster_of_entity,
        editor_pairs,
        category_pairs,
        interactions,
    }
}

/// Writes `a<TAB>b` lines.
pub fn write_pairs<W: Write>(pairs: &[(String, String)], mut out: W) -> std::io::Result<()> {
    for (a, b) in pairs {
        writeln!(out, "{a}\t{b}")?;
    }
    Ok(())
}
