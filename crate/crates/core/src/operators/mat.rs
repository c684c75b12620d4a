//! Minimal dense matrices generic over an exact or floating field.
//!
//! Rank-critical paths (Fredholm reduction, homology ranks) run over
//! `BigRational` with zero tolerance; numeric paths run over `f64` with an
//! explicit threshold. Both share the same elimination code.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::rational_to_f64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular at pivot {0}")]
    Singular(usize),
}

/// Field entries a dense matrix can hold. `magnitude` is only used to choose
/// pivots and to apply float-mode thresholds; exact zero tests never go
/// through it.
pub trait Entry: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_exactly_zero(&self) -> bool;
    fn magnitude(&self) -> f64;
}

impl Entry for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_exactly_zero(&self) -> bool {
        *self == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Entry for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn is_exactly_zero(&self) -> bool {
        self.is_zero()
    }
    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Entry> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MatError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatError::Shape("ragged rows".into()));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn block(&self, r0: usize, c0: usize, nrows: usize, ncols: usize) -> Mat<T> {
        let mut out: Mat<T> = Mat::zeros(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                out[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Mat<T>) -> Result<Mat<T>, MatError> {
        if self.cols != rhs.rows {
            return Err(MatError::Shape(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out: Mat<T> = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_exactly_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)].add(&a.mul(&rhs[(k, j)]));
                }
            }
        }
        Ok(out)
    }

    pub fn add_mat(&self, rhs: &Mat<T>) -> Result<Mat<T>, MatError> {
        self.zip_with(rhs, |a, b| a.add(b))
    }

    pub fn sub_mat(&self, rhs: &Mat<T>) -> Result<Mat<T>, MatError> {
        self.zip_with(rhs, |a, b| a.sub(b))
    }

    fn zip_with(&self, rhs: &Mat<T>, f: impl Fn(&T, &T) -> T) -> Result<Mat<T>, MatError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(MatError::Shape("elementwise shape mismatch".into()));
        }
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(&rhs.data) {
            *o = f(o, b);
        }
        Ok(out)
    }

    /// Largest absolute entry (f64 view).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|e| e.magnitude()).fold(0.0, f64::max)
    }

    /// Operator norm on sup-normed sequences: max over rows of the entry sum.
    pub fn row_sum_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.magnitude()).sum())
            .fold(0.0, f64::max)
    }

    /// Row echelon rank. `tol = None` treats only exact zeros as zero;
    /// `tol = Some(t)` zeroes out pivots of magnitude below t.
    pub fn rank(&self, tol: Option<f64>) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        let mut pivot_col = 0;
        while rank < m.rows && pivot_col < m.cols {
            let mut best = rank;
            let mut best_mag = m[(rank, pivot_col)].magnitude();
            for i in (rank + 1)..m.rows {
                let mag = m[(i, pivot_col)].magnitude();
                if mag > best_mag {
                    best = i;
                    best_mag = mag;
                }
            }
            let pivot_is_zero = match tol {
                Some(t) => best_mag < t,
                None => {
                    // magnitude can underflow for huge exact fractions; the
                    // authoritative test is exact.
                    let all_zero = (rank..m.rows).all(|i| m[(i, pivot_col)].is_exactly_zero());
                    if all_zero {
                        true
                    } else {
                        if m[(best, pivot_col)].is_exactly_zero() {
                            best = (rank..m.rows)
                                .find(|&i| !m[(i, pivot_col)].is_exactly_zero())
                                .unwrap();
                        }
                        false
                    }
                }
            };
            if pivot_is_zero {
                pivot_col += 1;
                continue;
            }
            m.swap_rows(rank, best);
            let pivot = m[(rank, pivot_col)].clone();
            for i in (rank + 1)..m.rows {
                if m[(i, pivot_col)].is_exactly_zero() {
                    continue;
                }
                let factor = m[(i, pivot_col)].div(&pivot);
                for j in pivot_col..m.cols {
                    let delta = factor.mul(&m[(rank, j)]);
                    m[(i, j)] = m[(i, j)].sub(&delta);
                }
                m[(i, pivot_col)] = T::zero();
            }
            rank += 1;
            pivot_col += 1;
        }
        rank
    }

    /// Solve self * X = B by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &Mat<T>, tol: Option<f64>) -> Result<Mat<T>, MatError> {
        if self.rows != self.cols {
            return Err(MatError::Shape("solve needs a square matrix".into()));
        }
        if b.rows != self.rows {
            return Err(MatError::Shape("rhs height mismatch".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut x = b.clone();
        for col in 0..n {
            let mut best = col;
            let mut best_mag = a[(col, col)].magnitude();
            for i in (col + 1)..n {
                let mag = a[(i, col)].magnitude();
                if mag > best_mag {
                    best = i;
                    best_mag = mag;
                }
            }
            let singular = match tol {
                Some(t) => best_mag < t,
                None => {
                    if a[(best, col)].is_exactly_zero() {
                        match ((col + 1)..n).find(|&i| !a[(i, col)].is_exactly_zero()) {
                            Some(i) => {
                                best = i;
                                false
                            }
                            None => true,
                        }
                    } else {
                        false
                    }
                }
            };
            if singular {
                return Err(MatError::Singular(col));
            }
            a.swap_rows(col, best);
            x.swap_rows(col, best);
            let pivot = a[(col, col)].clone();
            for i in (col + 1)..n {
                if a[(i, col)].is_exactly_zero() {
                    continue;
                }
                let factor = a[(i, col)].div(&pivot);
                for j in col..n {
                    let delta = factor.mul(&a[(col, j)]);
                    a[(i, j)] = a[(i, j)].sub(&delta);
                }
                for j in 0..x.cols {
                    let delta = factor.mul(&x[(col, j)]);
                    x[(i, j)] = x[(i, j)].sub(&delta);
                }
                a[(i, col)] = T::zero();
            }
        }
        // Back substitution.
        for col in (0..n).rev() {
            let pivot = a[(col, col)].clone();
            for j in 0..x.cols {
                let mut acc = x[(col, j)].clone();
                for k in (col + 1)..n {
                    acc = acc.sub(&a[(col, k)].mul(&x[(k, j)]));
                }
                x[(col, j)] = acc.div(&pivot);
            }
        }
        Ok(x)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for col in 0..self.cols {
            self.data.swap(i * self.cols + col, j * self.cols + col);
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}
