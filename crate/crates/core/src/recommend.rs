//! Implicit-feedback interactions and the `x_u·B` scorer.

use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;

use crate::ease::SimilarityModel;
use crate::error::{Error, Result};
use crate::ranking::top_k;
use crate::vocab::Vocab;

/// Ratings at or above this count as a positive interaction.
pub const DEFAULT_RATING_THRESHOLD: f64 = 3.5;

/// Interactions keyed by entity name, before alignment with a model.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawInteractions {
    users: BTreeMap<String, BTreeSet<String>>,
}

impl RawInteractions {
    pub fn from_pairs<I, U, E>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (U, E)>,
        U: Into<String>,
        E: Into<String>,
    {
        let mut users: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (u, e) in pairs {
            users.entry(u.into()).or_default().insert(e.into());
        }
        Self { users }
    }

    pub fn n_users(&self) -> usize {
        self.users.len()
    }

    pub fn n_pairs(&self) -> usize {
        self.users.values().map(BTreeSet::len).sum()
    }

    pub fn users(&self) -> impl Iterator<Item = (&str, &BTreeSet<String>)> {
        self.users.iter().map(|(u, s)| (u.as_str(), s))
    }
}

/// Parses `user<TAB>entity[<TAB>rating]` lines.
///
/// Rated pairs are kept iff `rating >= threshold`; unrated pairs are always
/// kept. Duplicates collapse.
pub fn load_interactions<R: BufRead>(source: R, threshold: f64) -> Result<RawInteractions> {
    let mut pairs = Vec::new();
    for (n, line) in source.lines().enumerate() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: n + 1,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        let (user, entity, keep) = match fields.as_slice() {
            [u, e] => (*u, *e, true),
            [u, e, r] => {
                let rating: f64 = r
                    .trim()
                    .parse()
                    .ok()
                    .filter(|x: &f64| x.is_finite())
                    .ok_or_else(|| parse_err(format!("rating {r:?} is not a number")))?;
                (*u, *e, rating >= threshold)
            }
            _ => {
                return Err(parse_err(format!(
                    "expected 2 or 3 tab-separated columns, found {}",
                    fields.len()
                )))
            }
        };
        if user.is_empty() || entity.is_empty() {
            return Err(parse_err("empty user or entity".into()));
        }
        if keep {
            pairs.push((user.to_string(), entity.to_string()));
        }
    }
    let raw = RawInteractions::from_pairs(pairs);
    if raw.n_users() == 0 {
        return Err(Error::NoInteractions);
    }
    Ok(raw)
}

/// Per-user entity index sets over a model's vocabulary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionSet {
    users: BTreeMap<String, BTreeSet<usize>>,
    entity_vocab: Vocab,
}

impl InteractionSet {
    /// Builds an aligned set directly; every index must be `< entity_vocab.len()`
    /// and no user may be empty.
    pub fn new(users: BTreeMap<String, BTreeSet<usize>>, entity_vocab: Vocab) -> Result<Self> {
        for (u, items) in &users {
            if items.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "user {u} has no interactions"
                )));
            }
            if let Some(&i) = items
                .iter()
                .next_back()
                .filter(|&&i| i >= entity_vocab.len())
            {
                return Err(Error::InvalidArgument(format!(
                    "user {u} references entity index {i} outside the vocabulary"
                )));
            }
        }
        Ok(Self {
            users,
            entity_vocab,
        })
    }

    pub fn n_users(&self) -> usize {
        self.users.len()
    }

    pub fn n_entities(&self) -> usize {
        self.entity_vocab.len()
    }

    pub fn entity_vocab(&self) -> &Vocab {
        &self.entity_vocab
    }

    pub fn get(&self, user: &str) -> Option<&BTreeSet<usize>> {
        self.users.get(user)
    }

    /// Users in ascending name order.
    pub fn users(&self) -> impl Iterator<Item = (&str, &BTreeSet<usize>)> {
        self.users.iter().map(|(u, s)| (u.as_str(), s))
    }
}

/// What [`align`] had to discard.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct AlignStats {
    pub kept_pairs: usize,
    pub dropped_pairs: usize,
    pub dropped_entities: usize,
    pub dropped_users: usize,
}

/// Restricts interactions to entities in `vocab` and drops users left empty.
pub fn align_to_vocab(
    raw: &RawInteractions,
    vocab: &Vocab,
) -> Result<(InteractionSet, AlignStats)> {
    let mut stats = AlignStats::default();
    let mut unknown: BTreeSet<&str> = BTreeSet::new();
    let mut users = BTreeMap::new();
    for (user, entities) in raw.users() {
        let mut kept = BTreeSet::new();
        for e in entities {
            match vocab.get(e) {
                Some(i) => {
                    kept.insert(i);
                }
                None => {
                    unknown.insert(e);
                    stats.dropped_pairs += 1;
                }
            }
        }
        if kept.is_empty() {
            stats.dropped_users += 1;
        } else {
            stats.kept_pairs += kept.len();
            users.insert(user.to_string(), kept);
        }
    }
    stats.dropped_entities = unknown.len();
    if users.is_empty() {
        return Err(Error::NoOverlap {
            dropped_entities: stats.dropped_entities,
            dropped_users: stats.dropped_users,
        });
    }
    if stats.dropped_pairs > 0 {
        log::info!(
            "align: dropped {} pairs over {} unknown entities and {} users",
            stats.dropped_pairs,
            stats.dropped_entities,
            stats.dropped_users
        );
    }
    Ok((
        InteractionSet {
            users,
            entity_vocab: vocab.clone(),
        },
        stats,
    ))
}

/// [`align_to_vocab`] against a fitted model's vocabulary.
pub fn align(
    raw: &RawInteractions,
    model: &SimilarityModel,
) -> Result<(InteractionSet, AlignStats)> {
    align_to_vocab(raw, model.entity_vocab())
}

/// `score[j] = Σ_{i ∈ history} B[i][j]`, summed in ascending `i`.
pub fn score_user<'a, I>(history: I, model: &SimilarityModel) -> Vec<f64>
where
    I: IntoIterator<Item = &'a usize>,
{
    let mut scores = vec![0.0; model.n_entities()];
    for &i in history {
        for (s, w) in scores.iter_mut().zip(model.weights().row(i)) {
            *s += w;
        }
    }
    scores
}

/// The `r` highest-scoring entities outside `history`, best first, ties to
/// the lower index.
pub fn top_r(scores: &[f64], history: &BTreeSet<usize>, r: usize) -> Vec<usize> {
    top_k(scores, r, |i| history.contains(&i))
}
