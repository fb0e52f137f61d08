//! Slow reference implementations for checking [`crate::ease::fit`].
//!
//! Nothing here shares code with the closed-form path: the Gram matrix is
//! rebuilt from the dense feature matrix, and the constrained objective is
//! minimised by projected gradient descent.

use crate::error::{Error, Result};
use crate::featurize::FeatureMatrix;
use crate::linalg::SquareMatrix;

/// Largest entity or feature count the oracle accepts.
pub const MAX_DIM: usize = 12;

const MAX_ITERATIONS: usize = 1_000_000;

fn check_size(fm: &FeatureMatrix) -> Result<()> {
    if fm.n_entities() > MAX_DIM || fm.n_features() > MAX_DIM {
        return Err(Error::InvalidArgument(format!(
            "oracle is limited to {MAX_DIM}x{MAX_DIM}, got {}x{}",
            fm.n_entities(),
            fm.n_features()
        )));
    }
    Ok(())
}

/// `‖X − X·B‖²_F + λ‖B‖²_F` with `X` the feature × entity matrix.
pub fn oracle_objective(fm: &FeatureMatrix, b: &SquareMatrix, lambda: f64) -> Result<f64> {
    let n = fm.n_entities();
    let m = fm.n_features();
    if b.dim() != n {
        return Err(Error::InvalidArgument(format!(
            "weights are {0}x{0}, expected {n}x{n}",
            b.dim()
        )));
    }
    if (0..n).any(|i| b.get(i, i) != 0.0) {
        return Err(Error::InvalidArgument(
            "weights have a nonzero diagonal".into(),
        ));
    }
    // f is entity-major, so X[feature][entity] = f[entity * m + feature]
    let f = fm.to_dense();
    let mut loss = 0.0;
    for feature in 0..m {
        for j in 0..n {
            let mut recon = 0.0;
            for i in 0..n {
                recon += f[i * m + feature] * b.get(i, j);
            }
            let r = f[j * m + feature] - recon;
            loss += r * r;
        }
    }
    let penalty: f64 = b.as_slice().iter().map(|w| w * w).sum();
    Ok(loss + lambda * penalty)
}

/// Minimises the zero-diagonal ridge objective by projected gradient descent
/// until the projected gradient's Frobenius norm drops below `tolerance`.
///
/// Gradient: `2(K·B − K + λB)` with `K = XᵀX`; projection zeroes the
/// diagonal. Step size `1 / (2(trace(K) + λ))`, which bounds the inverse
/// Lipschitz constant.
pub fn oracle_fit(fm: &FeatureMatrix, lambda: f64, tolerance: f64) -> Result<SquareMatrix> {
    check_size(fm)?;
    if lambda <= 0.0 || lambda.is_nan() {
        return Err(Error::InvalidArgument(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    let n = fm.n_entities();
    let m = fm.n_features();
    let f = fm.to_dense();

    let mut k = vec![0.0; n * n];
    for a in 0..n {
        for c in 0..n {
            k[a * n + c] = (0..m).map(|j| f[a * m + j] * f[c * m + j]).sum();
        }
    }
    let trace: f64 = (0..n).map(|i| k[i * n + i]).sum();
    let step = 1.0 / (2.0 * (trace + lambda));

    let mut b = vec![0.0; n * n];
    let mut grad = vec![0.0; n * n];
    let mut norm = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        norm = 0.0;
        for i in 0..n {
            for j in 0..n {
                let g = if i == j {
                    0.0
                } else {
                    let kb: f64 = (0..n).map(|l| k[i * n + l] * b[l * n + j]).sum();
                    2.0 * (kb - k[i * n + j] + lambda * b[i * n + j])
                };
                grad[i * n + j] = g;
                norm += g * g;
            }
        }
        norm = norm.sqrt();
        if norm < tolerance {
            return Ok(SquareMatrix::from_row_major(n, b));
        }
        for (w, g) in b.iter_mut().zip(&grad) {
            *w -= step * g;
        }
    }
    Err(Error::NotConverged {
        iterations: MAX_ITERATIONS,
        grad_norm: norm,
    })
}
