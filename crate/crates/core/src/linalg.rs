//! Dense square matrices and an SPD inverse via Cholesky.
//!
//! Parallel loops here always give each output element to a single sequential
//! accumulation, so results are bit-identical for any rayon thread count.

use rayon::prelude::*;

/// Row-major dense square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Wraps row-major data; panics unless `data.len() == n * n`.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n, "expected {n}x{n} row-major data");
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.n.max(1)).take(self.n)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn add_to_diagonal(&mut self, v: f64) {
        for i in 0..self.n {
            self.data[i * self.n + i] += v;
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.data[j * n + i] = self.data[i * n + j];
            }
        }
        t
    }

    /// `self * other`, row-parallel.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = vec![0.0; n * n];
        out.par_chunks_mut(n.max(1))
            .enumerate()
            .for_each(|(i, out_row)| {
                for (k, &a) in self.row(i).iter().enumerate() {
                    if a != 0.0 {
                        for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                            *o += a * b;
                        }
                    }
                }
            });
        Self { n, data: out }
    }
}

/// Lower Cholesky factor `L` of an SPD matrix, `A = L Lᵀ`.
///
/// Returns the index of the first non-positive (or non-finite) pivot on failure.
pub fn cholesky(a: &SquareMatrix) -> Result<SquareMatrix, usize> {
    let n = a.dim();
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let (row_j, below) = l[j * n..].split_at_mut(n);
        let d = a.get(j, j) - row_j[..j].iter().map(|x| x * x).sum::<f64>();
        if d <= 0.0 || !d.is_finite() {
            return Err(j);
        }
        let pivot = d.sqrt();
        row_j[j] = pivot;
        let row_j = &*row_j;
        // row i > j needs only its own first j entries and row j
        below
            .par_chunks_mut(n)
            .enumerate()
            .for_each(|(offset, row_i)| {
                let i = j + 1 + offset;
                let mut s = a.get(i, j);
                for k in 0..j {
                    s -= row_i[k] * row_j[k];
                }
                row_i[j] = s / pivot;
            });
    }
    Ok(SquareMatrix::from_row_major(n, l))
}

/// Inverse of an SPD matrix through its Cholesky factor.
///
/// Computes `W = L⁻¹` column by column (stored transposed so each column is a
/// contiguous row), then `A⁻¹ = Wᵀ W`. Only the upper triangle is computed and
/// mirrored, so the result is exactly symmetric.
pub fn spd_inverse(a: &SquareMatrix) -> Result<SquareMatrix, usize> {
    let l = cholesky(a)?;
    let n = a.dim();

    // w_t row j = column j of L⁻¹; entries before j are zero.
    let mut w_t = vec![0.0; n * n];
    w_t.par_chunks_mut(n.max(1)).enumerate().for_each(|(j, w)| {
        w[j] = 1.0 / l.get(j, j);
        for i in j + 1..n {
            let l_row = l.row(i);
            let mut s = 0.0;
            for k in j..i {
                s -= l_row[k] * w[k];
            }
            w[i] = s / l_row[i];
        }
    });

    let mut inv = vec![0.0; n * n];
    inv.par_chunks_mut(n.max(1))
        .enumerate()
        .for_each(|(i, out)| {
            let wi = &w_t[i * n..(i + 1) * n];
            for (j, slot) in out.iter_mut().enumerate().skip(i) {
                let wj = &w_t[j * n..(j + 1) * n];
                let start = j; // max(i, j)
                let mut s = 0.0;
                for k in start..n {
                    s += wi[k] * wj[k];
                }
                *slot = s;
            }
        });
    for i in 0..n {
        for j in 0..i {
            inv[i * n + j] = inv[j * n + i];
        }
    }
    Ok(SquareMatrix::from_row_major(n, inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spd(n: usize, seed: u64) -> SquareMatrix {
        // A = RᵀR + I with a cheap deterministic R
        let mut state = seed;
        let mut r = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                r.set(i, j, ((state >> 33) as f64 / (1u64 << 31) as f64) - 0.5);
            }
        }
        let mut a = r.transpose().matmul(&r);
        a.add_to_diagonal(1.0);
        a
    }

    #[test]
    fn two_by_two_inverse() {
        let a = SquareMatrix::from_row_major(2, vec![4.0, 2.0, 2.0, 4.0]);
        let p = spd_inverse(&a).unwrap();
        let expected = [4.0 / 12.0, -2.0 / 12.0, -2.0 / 12.0, 4.0 / 12.0];
        for (x, e) in p.as_slice().iter().zip(expected) {
            assert_abs_diff_eq!(*x, e, epsilon = 1e-15);
        }
    }

    #[test]
    fn cholesky_reconstructs() {
        let a = spd(7, 3);
        let l = cholesky(&a).unwrap();
        let back = l.matmul(&l.transpose());
        for (x, y) in back.as_slice().iter().zip(a.as_slice()) {
            assert_abs_diff_eq!(*x, *y, epsilon = 1e-12);
        }
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        for n in [1, 2, 5, 17] {
            let a = spd(n, n as u64);
            let p = spd_inverse(&a).unwrap();
            let prod = a.matmul(&p);
            let id = SquareMatrix::identity(n);
            for (x, y) in prod.as_slice().iter().zip(id.as_slice()) {
                assert_abs_diff_eq!(*x, *y, epsilon = 1e-10);
            }
            assert_eq!(p, p.transpose());
        }
    }

    #[test]
    fn rejects_indefinite() {
        let a = SquareMatrix::from_row_major(2, vec![1.0, 2.0, 2.0, 1.0]);
        assert_eq!(cholesky(&a).unwrap_err(), 1);
        let z = SquareMatrix::zeros(3);
        assert_eq!(spd_inverse(&z).unwrap_err(), 0);
    }

    #[test]
    fn empty_matrix() {
        let p = spd_inverse(&SquareMatrix::zeros(0)).unwrap();
        assert_eq!(p.dim(), 0);
    }
}
