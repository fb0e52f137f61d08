//! Closed-form fit of the zero-diagonal ridge regression (EASE) similarity model.
//!
//! Entities are the columns of the reconstruction: with `X` the feature × entity
//! matrix (the transpose of [`FeatureMatrix`]), the fit minimises
//!
//! ```text
//! ‖X − X·B‖²_F + λ‖B‖²_F   subject to diag(B) = 0
//! ```
//!
//! whose solution is `B = I − P·diag(1/diag(P))` with `P = (XᵀX + λI)⁻¹`,
//! i.e. `B[i][j] = −P[i][j] / P[j][j]` off the diagonal. `B` is generally not
//! symmetric; `B[i][j]·P[j][j] = B[j][i]·P[i][i]` holds instead.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::featurize::FeatureMatrix;
use crate::linalg::{spd_inverse, SquareMatrix};
use crate::ranking::top_k;
use crate::vocab::Vocab;

/// Regularization strength used when none is given.
pub const DEFAULT_LAMBDA: f64 = 100.0;

/// Dense entity × entity weight matrix with an exactly zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityModel {
    weights: SquareMatrix,
    lambda: Option<f64>,
    entity_vocab: Vocab,
}

impl SimilarityModel {
    /// Assembles a model from stored parts, checking shape, the zero diagonal
    /// and finiteness.
    pub fn from_parts(
        weights: SquareMatrix,
        entity_vocab: Vocab,
        lambda: Option<f64>,
    ) -> Result<Self> {
        let n = weights.dim();
        if entity_vocab.len() != n {
            return Err(Error::InvalidArgument(format!(
                "vocabulary has {} entries but weights are {n}x{n}",
                entity_vocab.len()
            )));
        }
        if let Some(i) = (0..n).find(|&i| weights.get(i, i) != 0.0) {
            return Err(Error::InvalidArgument(format!("nonzero diagonal at {i}")));
        }
        if weights.as_slice().iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite weight".into()));
        }
        Ok(Self {
            weights,
            lambda,
            entity_vocab,
        })
    }

    pub fn n_entities(&self) -> usize {
        self.weights.dim()
    }

    pub fn weights(&self) -> &SquareMatrix {
        &self.weights
    }

    /// The λ the model was fit with; unknown for models read from disk.
    pub fn lambda(&self) -> Option<f64> {
        self.lambda
    }

    pub fn entity_vocab(&self) -> &Vocab {
        &self.entity_vocab
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights.get(i, j)
    }

    /// `B[a][b]` by entity name.
    pub fn similarity(&self, entity_a: &str, entity_b: &str) -> Result<f64> {
        let a = self.entity_vocab.lookup(entity_a)?;
        let b = self.entity_vocab.lookup(entity_b)?;
        Ok(self.weights.get(a, b))
    }

    /// The `k` entities with the largest weight in `entity`'s row, excluding
    /// the entity itself. Ties go to the lower index.
    pub fn top_similar(&self, entity: &str, k: usize) -> Result<Vec<(&str, f64)>> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        let e = self.entity_vocab.lookup(entity)?;
        let row = self.weights.row(e);
        Ok(top_k(row, k, |j| j == e)
            .into_iter()
            .map(|j| (self.entity_vocab.name(j), row[j]))
            .collect())
    }

    /// Zeroes every weight with `|w| < threshold`. Lossy; for smaller files.
    pub fn sparsify(&mut self, threshold: f64) -> usize {
        let n = self.n_entities();
        let mut zeroed = 0;
        for i in 0..n {
            for j in 0..n {
                let w = self.weights.get(i, j);
                if w != 0.0 && w.abs() < threshold {
                    self.weights.set(i, j, 0.0);
                    zeroed += 1;
                }
            }
        }
        zeroed
    }
}

/// Entity Gram matrix `F·Fᵀ`: entry (a, b) is the dot product of the feature
/// vectors of entities a and b.
pub fn entity_gram(fm: &FeatureMatrix) -> SquareMatrix {
    let n = fm.n_entities();
    let columns = fm.columns();
    let mut data = vec![0.0; n * n];
    data.par_chunks_mut(n.max(1))
        .enumerate()
        .for_each(|(a, out)| {
            let (cols, vals) = fm.row(a);
            for (&j, &fa) in cols.iter().zip(vals) {
                for &(b, fb) in &columns[j] {
                    out[b] += fa * fb;
                }
            }
        });
    SquareMatrix::from_row_major(n, data)
}

/// Fits the similarity model in closed form.
pub fn fit(fm: &FeatureMatrix, lambda: f64) -> Result<SimilarityModel> {
    if lambda <= 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "lambda must be a positive finite number, got {lambda}"
        )));
    }
    let n = fm.n_entities();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "feature matrix has no entities".into(),
        ));
    }

    let mut gram = entity_gram(fm);
    gram.add_to_diagonal(lambda);
    let p = spd_inverse(&gram).map_err(|pivot| Error::NotPositiveDefinite { lambda, pivot })?;

    let diag: Vec<f64> = (0..n).map(|j| p.get(j, j)).collect();
    let mut data = vec![0.0; n * n];
    data.par_chunks_mut(n).enumerate().for_each(|(i, out)| {
        let p_row = p.row(i);
        for j in 0..n {
            // + 0.0 folds -0.0 into 0.0
            out[j] = if i == j {
                0.0
            } else {
                -(p_row[j] / diag[j]) + 0.0
            };
        }
    });
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::NotPositiveDefinite { lambda, pivot: n });
    }

    Ok(SimilarityModel {
        weights: SquareMatrix::from_row_major(n, data),
        lambda: Some(lambda),
        entity_vocab: fm.entity_vocab().clone(),
    })
}
