//! Dense matrices with fraction-free elimination.
//!
//! `rank` and `determinant` use Bareiss one-step elimination: every division
//! is exact (quotients are minors), so on integer input the intermediate
//! values stay integral instead of exploding into unreduced fractions.
//! `solve`/`inverse` use Gauss-Jordan with exact pivots and re-multiply the
//! result as a self-check. Pivoting is first-nonzero, which keeps runs
//! deterministic; these routines assume an exact scalar.

use std::fmt;

use num_traits::{Num, Signed};
use thiserror::Error;

/// Scalar the elimination routines operate over. Deployed at `BigRational`;
/// any `num_traits` field type (`f64` included) satisfies the bounds, but the
/// exactness guarantees only hold for exact arithmetic.
pub trait Scalar: Clone + Num + Signed + PartialOrd + fmt::Debug + fmt::Display {}

impl<T> Scalar for T where T: Clone + Num + Signed + PartialOrd + fmt::Debug + fmt::Display {}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is singular with rank {rank}")]
    Singular { rank: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric at ({row},{col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("dimension mismatch: left is {left_rows}x{left_cols}, right is {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
}

/// Outcome of Sylvester's positive-definiteness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PdResult<T> {
    PositiveDefinite,
    /// First leading principal minor that is not strictly positive
    /// (1-based order), with its exact value.
    NotPd { minor_index: usize, minor: T },
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(r, c).clone() + a.clone() * b.clone();
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for r in 0..self.rows {
            for c in 0..self.cols {
                let want = if r == c { T::one() } else { T::zero() };
                if *self.get(r, c) != want {
                    return false;
                }
            }
        }
        true
    }

    /// Exact rank by fraction-free Bareiss elimination with row swaps and
    /// column skipping.
    pub fn rank(&self) -> usize {
        self.bareiss(None).0
    }

    /// Exact determinant of a square matrix.
    pub fn determinant(&self) -> Result<T, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows == 0 {
            return Ok(T::one());
        }
        let (rank, det) = self.bareiss(Some(self.rows));
        if rank < self.rows {
            return Ok(T::zero());
        }
        Ok(det)
    }

    /// One-step Bareiss elimination on a working copy. Returns the rank and,
    /// when `det_dim = Some(n)` and the rank is full, the determinant (the
    /// final pivot, sign-corrected for row swaps).
    fn bareiss(&self, det_dim: Option<usize>) -> (usize, T) {
        let mut a = self.clone();
        let limit = det_dim.unwrap_or_else(|| self.rows.min(self.cols));
        let mut prev = T::one();
        let mut sign_flip = false;
        let mut r = 0;
        for c in 0..self.cols {
            if r == limit || r == self.rows {
                break;
            }
            let pivot_row = (r..self.rows).find(|&i| !a.get(i, c).is_zero());
            let Some(p) = pivot_row else { continue };
            if p != r {
                for j in 0..self.cols {
                    let tmp = a.get(r, j).clone();
                    a.set(r, j, a.get(p, j).clone());
                    a.set(p, j, tmp);
                }
                sign_flip = !sign_flip;
            }
            let pivot = a.get(r, c).clone();
            for i in (r + 1)..self.rows {
                let lead = a.get(i, c).clone();
                for j in (c + 1)..self.cols {
                    let num = pivot.clone() * a.get(i, j).clone() - lead.clone() * a.get(r, j).clone();
                    a.set(i, j, num / prev.clone());
                }
                a.set(i, c, T::zero());
            }
            prev = pivot;
            r += 1;
        }
        let det = if sign_flip { -prev } else { prev };
        (r, det)
    }

    /// Exact solution `X` of `A·X = B`. The result is re-multiplied against
    /// `B` before being returned.
    pub fn solve(&self, b: &Self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if b.rows != self.rows {
            return Err(LinalgError::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: b.rows,
                right_cols: b.cols,
            });
        }
        let n = self.rows;
        // Gauss-Jordan on the augmented block [A | B].
        let mut a = self.clone();
        let mut x = b.clone();
        for col in 0..n {
            let pivot_row = (col..n).find(|&i| !a.get(i, col).is_zero());
            let Some(p) = pivot_row else {
                return Err(LinalgError::Singular { rank: self.rank() });
            };
            if p != col {
                a.swap_rows(p, col);
                x.swap_rows(p, col);
            }
            let inv = T::one() / a.get(col, col).clone();
            a.scale_row(col, &inv);
            x.scale_row(col, &inv);
            for i in 0..n {
                if i == col {
                    continue;
                }
                let factor = a.get(i, col).clone();
                if factor.is_zero() {
                    continue;
                }
                a.sub_scaled_row(i, col, &factor);
                x.sub_scaled_row(i, col, &factor);
            }
        }
        if self.mul(&x)? != *b {
            return Err(LinalgError::Singular { rank: self.rank() });
        }
        Ok(x)
    }

    /// Exact inverse; `inverse(A)·A = identity` exactly.
    pub fn inverse(&self) -> Result<Self, LinalgError> {
        self.solve(&Self::identity(self.rows))
    }

    /// Sylvester's criterion: positive definite iff every leading principal
    /// minor is strictly positive. Requires exact symmetry.
    pub fn sylvester_pd(&self) -> Result<PdResult<T>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        for r in 0..self.rows {
            for c in (r + 1)..self.cols {
                if self.get(r, c) != self.get(c, r) {
                    return Err(LinalgError::NotSymmetric { row: r, col: c });
                }
            }
        }
        for k in 1..=self.rows {
            let minor = self.leading_submatrix(k).determinant()?;
            if minor <= T::zero() {
                return Ok(PdResult::NotPd {
                    minor_index: k,
                    minor,
                });
            }
        }
        Ok(PdResult::PositiveDefinite)
    }

    fn leading_submatrix(&self, k: usize) -> Self {
        Self::from_fn(k, k, |r, c| self.get(r, c).clone())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn scale_row(&mut self, i: usize, factor: &T) {
        for c in 0..self.cols {
            let v = self.get(i, c).clone() * factor.clone();
            self.set(i, c, v);
        }
    }

    /// `row[i] -= factor * row[j]`
    fn sub_scaled_row(&mut self, i: usize, j: usize, factor: &T) {
        for c in 0..self.cols {
            let v = self.get(i, c).clone() - factor.clone() * self.get(j, c).clone();
            self.set(i, c, v);
        }
    }
}
