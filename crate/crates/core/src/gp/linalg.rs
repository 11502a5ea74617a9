//! Small dense helpers: a lower-triangular Cholesky factor that grows one row at a time.

use crate::error::{BaxError, Result};

/// Largest jitter, relative to the signal variance, tried before giving up.
pub(crate) const MAX_RELATIVE_JITTER: f64 = 1e-4;
/// Starting jitter, relative to the signal variance.
pub(crate) const BASE_RELATIVE_JITTER: f64 = 1e-8;

/// Packed row-major lower-triangular Cholesky factor.
///
/// Row `i` holds `i + 1` entries; pushing a row costs O(n^2) for the forward solve.
#[derive(Debug, Clone, Default)]
pub(crate) struct GrowingCholesky {
    data: Vec<f64>,
    n: usize,
}

impl GrowingCholesky {
    pub fn new() -> Self {
        Self::default()
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        let start = i * (i + 1) / 2;
        &self.data[start..start + i + 1]
    }

    /// In-place solve `L y = b`.
    pub fn forward_solve(&self, b: &mut [f64]) {
        debug_assert_eq!(b.len(), self.n);
        for i in 0..self.n {
            let row = self.row(i);
            let mut s = b[i];
            for (l, y) in row[..i].iter().zip(b.iter()) {
                s -= l * y;
            }
            b[i] = s / row[i];
        }
    }

    /// In-place solve `L^T y = b`.
    #[cfg(test)]
    pub fn backward_solve_transpose(&self, b: &mut [f64]) {
        debug_assert_eq!(b.len(), self.n);
        for i in (0..self.n).rev() {
            let yi = b[i] / self.row(i)[i];
            b[i] = yi;
            let row = self.row(i);
            for (bj, l) in b[..i].iter_mut().zip(row[..i].iter()) {
                *bj -= l * yi;
            }
        }
    }

    /// Appends the factor row for a new point given its covariances with the
    /// existing points (`cross`) and its own variance (`diag`).
    ///
    /// `jitter` is added to the diagonal and escalated tenfold up to `max_jitter`
    /// if the pivot is not positive. Returns the jitter actually used.
    pub fn push(&mut self, cross: &[f64], diag: f64, jitter: f64, max_jitter: f64) -> Result<f64> {
        debug_assert_eq!(cross.len(), self.n);
        let mut row = cross.to_vec();
        self.forward_solve(&mut row);
        let norm2: f64 = row.iter().map(|v| v * v).sum();
        let mut j = jitter;
        loop {
            let pivot2 = diag + j - norm2;
            if pivot2 > 0.0 && pivot2.is_finite() {
                row.push(pivot2.sqrt());
                break;
            }
            j *= 10.0;
            if j > max_jitter * (1.0 + 1e-12) {
                return Err(BaxError::Numerical {
                    message: format!(
                        "incremental Cholesky pivot not positive (diag {diag:e}, projected {norm2:e})"
                    ),
                    size: self.n + 1,
                    jitter: j / 10.0,
                });
            }
        }
        self.data.extend_from_slice(&row);
        self.n += 1;
        Ok(j)
    }
}
