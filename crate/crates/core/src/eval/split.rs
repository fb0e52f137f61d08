//! Seeded user-fold assignment and per-user history/answer split.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::rng::SplitRng;
use crate::recommend::InteractionSet;

/// One user's held-in and held-out entities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UserSplit {
    pub history: BTreeSet<usize>,
    pub answer: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitPlan {
    pub seed: u64,
    pub n_folds: usize,
    pub history_fraction: f64,
    pub fold_of_user: BTreeMap<String, usize>,
    pub parts: BTreeMap<String, UserSplit>,
    /// Users with fewer than two interactions.
    pub excluded_users: Vec<String>,
}

/// Header-level facts about a [`SplitPlan`], for reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitSummary {
    pub seed: u64,
    pub n_folds: usize,
    pub history_fraction: f64,
    pub n_users_evaluated: usize,
    pub n_users_excluded: usize,
    pub fold_sizes: Vec<usize>,
}

/// History size for a user with `n >= 2` interactions:
/// `round(fraction · n)` clamped to `[1, n − 1]`.
pub fn history_size(n: usize, fraction: f64) -> usize {
    let h = (fraction * n as f64).round() as usize;
    h.clamp(1, n - 1)
}

/// Splits users into folds and each user's interactions into history/answer.
///
/// 1. Users with at least two interactions are taken in ascending name order.
/// 2. That list is shuffled with [`SplitRng`] seeded by `seed` and dealt
///    round-robin into `n_folds` folds.
/// 3. Then, again in ascending user-name order and continuing the same
///    stream, each user's entity indices (ascending) are shuffled and the
///    first [`history_size`] become history, the rest answer.
pub fn make_split(
    interactions: &InteractionSet,
    n_folds: usize,
    history_fraction: f64,
    seed: u64,
) -> Result<SplitPlan> {
    if n_folds < 2 {
        return Err(Error::InvalidArgument(format!(
            "n_folds must be at least 2, got {n_folds}"
        )));
    }
    if !(history_fraction > 0.0 && history_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "history_fraction must be in (0, 1), got {history_fraction}"
        )));
    }

    let mut eligible = Vec::new();
    let mut excluded_users = Vec::new();
    for (user, items) in interactions.users() {
        if items.len() >= 2 {
            eligible.push(user);
        } else {
            excluded_users.push(user.to_string());
        }
    }
    if eligible.is_empty() {
        return Err(Error::InvalidArgument(
            "no user has at least two interactions".into(),
        ));
    }
    if eligible.len() < n_folds {
        return Err(Error::InvalidArgument(format!(
            "{} evaluable users cannot fill {n_folds} folds",
            eligible.len()
        )));
    }
    if !excluded_users.is_empty() {
        log::info!(
            "split: excluded {} users with a single interaction",
            excluded_users.len()
        );
    }

    let mut rng = SplitRng::new(seed);
    let mut order = eligible.clone();
    rng.shuffle(&mut order);
    let fold_of_user: BTreeMap<String, usize> = order
        .iter()
        .enumerate()
        .map(|(k, u)| (u.to_string(), k % n_folds))
        .collect();

    let mut parts = BTreeMap::new();
    for user in eligible {
        let mut items: Vec<usize> = interactions
            .get(user)
            .expect("eligible user exists")
            .iter()
            .copied()
            .collect();
        rng.shuffle(&mut items);
        let h = history_size(items.len(), history_fraction);
        let answer = items.split_off(h);
        parts.insert(
            user.to_string(),
            UserSplit {
                history: items.into_iter().collect(),
                answer: answer.into_iter().collect(),
            },
        );
    }

    Ok(SplitPlan {
        seed,
        n_folds,
        history_fraction,
        fold_of_user,
        parts,
        excluded_users,
    })
}

impl SplitPlan {
    /// Users of `fold` in ascending name order.
    pub fn fold_users(&self, fold: usize) -> Vec<&str> {
        self.fold_of_user
            .iter()
            .filter(|(_, &f)| f == fold)
            .map(|(u, _)| u.as_str())
            .collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_folds];
        for &f in self.fold_of_user.values() {
            sizes[f] += 1;
        }
        sizes
    }

    pub fn summary(&self) -> SplitSummary {
        SplitSummary {
            seed: self.seed,
            n_folds: self.n_folds,
            history_fraction: self.history_fraction,
            n_users_evaluated: self.parts.len(),
            n_users_excluded: self.excluded_users.len(),
            fold_sizes: self.fold_sizes(),
        }
    }
}
