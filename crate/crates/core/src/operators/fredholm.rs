//! Trace-class data, Neumann inversion, and the finite Fredholm reduction.
//!
//! An operator f on a truncated sequence space is given by rows lambda_i v_i
//! with sup|v_i| <= 1 and summable lambda. Splitting at the minimal N with
//! tail sum s < 1, the block form (E F; G H) of f yields the invertible
//! factorization of 1 - f through the Schur complement
//! E' = (1 - E) - F (1 - H)^{-1} G, which carries the kernel and cokernel of
//! 1 - f.

use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use super::mat::{Entry, Mat, MatError};

fn rational_one() -> BigRational {
    num_traits::One::one()
}

#[derive(Debug, Error, PartialEq)]
pub enum FredholmError {
    #[error("norm certificate s = {0} is not < 1")]
    Contraction(f64),
    #[error("declared certificate {declared} is below the measured row-sum bound {measured}")]
    Certificate { declared: f64, measured: f64 },
    #[error("no split with tail sum < 1 inside the truncation")]
    NoSplit,
    #[error("invalid trace-class data: {0}")]
    Invalid(String),
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Scalar lambda weights: nonnegative, float or exact per mode.
pub trait TraceEntry: Entry {
    fn as_f64(&self) -> f64;
    fn lt_one(&self) -> bool;
    fn is_nonneg(&self) -> bool;
    fn abs_le_one(&self) -> bool;
}

impl TraceEntry for f64 {
    fn as_f64(&self) -> f64 {
        *self
    }
    fn lt_one(&self) -> bool {
        *self < 1.0
    }
    fn is_nonneg(&self) -> bool {
        *self >= 0.0
    }
    fn abs_le_one(&self) -> bool {
        self.abs() <= 1.0
    }
}

impl TraceEntry for BigRational {
    fn as_f64(&self) -> f64 {
        crate::scalar::rational_to_f64(self)
    }
    fn lt_one(&self) -> bool {
        *self < rational_one()
    }
    fn is_nonneg(&self) -> bool {
        !self.is_negative()
    }
    fn abs_le_one(&self) -> bool {
        self.abs() <= rational_one()
    }
}

/// A trace-class operator at truncation size `dim`: finitely many scaled
/// rows, implicitly zero beyond them.
#[derive(Debug, Clone)]
pub struct TraceClassDecomposition<T> {
    pub p: f64,
    pub rows: Vec<(T, Vec<T>)>,
    pub dim: usize,
}

impl<T: TraceEntry> TraceClassDecomposition<T> {
    pub fn new(p: f64, rows: Vec<(T, Vec<T>)>, dim: usize) -> Result<Self, FredholmError> {
        if !(0.0 < p && p <= 1.0) {
            return Err(FredholmError::Invalid(format!("p = {p} outside (0, 1]")));
        }
        if rows.len() > dim {
            return Err(FredholmError::Invalid(format!(
                "{} rows exceed truncation size {dim}",
                rows.len()
            )));
        }
        for (i, (lambda, v)) in rows.iter().enumerate() {
            if !lambda.is_nonneg() {
                return Err(FredholmError::Invalid(format!("lambda_{i} is negative")));
            }
            if v.len() != dim {
                return Err(FredholmError::Invalid(format!(
                    "row {i} has length {} instead of {dim}",
                    v.len()
                )));
            }
            if !v.iter().all(|x| x.abs_le_one()) {
                return Err(FredholmError::Invalid(format!(
                    "row {i} has sup norm above 1"
                )));
            }
        }
        Ok(TraceClassDecomposition { p, rows, dim })
    }

    /// The dense dim x dim matrix with row i equal to lambda_i v_i.
    pub fn to_matrix(&self) -> Mat<T> {
        let mut m = Mat::zeros(self.dim, self.dim);
        for (i, (lambda, v)) in self.rows.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                m[(i, j)] = lambda.mul(x);
            }
        }
        m
    }

    /// Tail sum lambda_N + lambda_{N+1} + ... (rows beyond the stored ones
    /// contribute zero).
    pub fn tail_sum(&self, split: usize) -> T {
        let mut s = T::zero();
        for (lambda, _) in self.rows.iter().skip(split) {
            s = s.add(lambda);
        }
        s
    }

    /// Minimal split index with tail sum < 1.
    pub fn minimal_split(&self) -> Result<usize, FredholmError> {
        for n in 0..=self.rows.len() {
            if self.tail_sum(n).lt_one() {
                return Ok(n);
            }
        }
        Err(FredholmError::NoSplit)
    }
}

/// The finite reduction of 1 - f: the Schur complement block carries the
/// kernel and cokernel.
#[derive(Debug, Clone)]
pub struct FiniteReduction<T> {
    pub split: usize,
    pub e_prime: Mat<T>,
    pub tail_sum: T,
    pub neumann_depth: Option<u32>,
    pub neumann_error: f64,
}

impl<T: TraceEntry> FiniteReduction<T> {
    /// Kernel and cokernel dimensions of 1 - f at truncation, from the rank
    /// of the Schur complement. `tol = None` for exact data.
    pub fn kernel_cokernel(&self, tol: Option<f64>) -> (usize, usize) {
        let n = self.e_prime.nrows();
        let rank = if n == 0 { 0 } else { self.e_prime.rank(tol) };
        (n - rank, n - rank)
    }

    pub fn index(&self, tol: Option<f64>) -> i64 {
        let (k, c) = self.kernel_cokernel(tol);
        k as i64 - c as i64
    }
}

/// Truncated geometric series for (1 - H)^{-1} under a certified bound
/// s < 1 dominating the sum of the row sup norms of H. The partial sum at
/// depth J leaves an entrywise error of at most s^{J+1} / (1 - s).
pub fn neumann_inverse(
    h: &Mat<f64>,
    s: f64,
    tol: f64,
) -> Result<(Mat<f64>, u32), FredholmError> {
    if s.is_nan() || !(0.0..1.0).contains(&s) {
        return Err(FredholmError::Contraction(s));
    }
    let measured = row_sup_sum(h);
    if measured > s + 1e-12 {
        return Err(FredholmError::Certificate {
            declared: s,
            measured,
        });
    }
    let depth = neumann_depth(s, tol);
    let n = h.nrows();
    // Horner form: S_J = I + H (I + H (... (I + H))).
    let mut acc = Mat::identity(n);
    for _ in 0..depth {
        acc = h.matmul(&acc)?.add_mat(&Mat::identity(n))?;
    }
    Ok((acc, depth))
}

/// Minimal J with s^{J+1} / (1 - s) <= tol (capped at 10^6 rounds).
pub fn neumann_depth(s: f64, tol: f64) -> u32 {
    if s == 0.0 {
        return 0;
    }
    let mut depth = 0u32;
    let mut err = s / (1.0 - s);
    while err > tol && depth < 1_000_000 {
        err *= s;
        depth += 1;
    }
    depth
}

/// Sum over rows of the sup norm of the row: the certificate that makes the
/// entrywise bound |(H^j)_{im}| <= c_i s^{j-1} go through.
pub fn row_sup_sum(h: &Mat<f64>) -> f64 {
    (0..h.nrows())
        .map(|i| h.row(i).iter().fold(0.0f64, |m, x| m.max(x.abs())))
        .sum()
}

/// Float-mode reduction: Neumann inversion of 1 - H at tolerance `tol`.
pub fn fredholm_reduce(
    t: &TraceClassDecomposition<f64>,
    tol: f64,
) -> Result<FiniteReduction<f64>, FredholmError> {
    let split = t.minimal_split()?;
    let s = t.tail_sum(split);
    let m = t.to_matrix();
    let n = split;
    let rest = t.dim - n;
    let e = m.block(0, 0, n, n);
    let f = m.block(0, n, n, rest);
    let g = m.block(n, 0, rest, n);
    let h = m.block(n, n, rest, rest);
    let (h_inv, depth) = neumann_inverse(&h, s, tol)?;
    let one_minus_e = Mat::identity(n).sub_mat(&e)?;
    let e_prime = one_minus_e.sub_mat(&f.matmul(&h_inv)?.matmul(&g)?)?;
    Ok(FiniteReduction {
        split,
        e_prime,
        tail_sum: s,
        neumann_depth: Some(depth),
        neumann_error: s.powi(depth as i32 + 1) / (1.0 - s),
    })
}

/// Exact-mode reduction: (1 - H)^{-1} G by exact Gaussian solve, zero error.
pub fn fredholm_reduce_exact(
    t: &TraceClassDecomposition<BigRational>,
) -> Result<FiniteReduction<BigRational>, FredholmError> {
    let split = t.minimal_split()?;
    let s = t.tail_sum(split);
    let m = t.to_matrix();
    let n = split;
    let rest = t.dim - n;
    let e = m.block(0, 0, n, n);
    let f = m.block(0, n, n, rest);
    let g = m.block(n, 0, rest, n);
    let h = m.block(n, n, rest, rest);
    let one_minus_h = Mat::identity(rest).sub_mat(&h)?;
    let solved = if rest == 0 {
        Mat::zeros(0, n)
    } else {
        one_minus_h.solve(&g, None)?
    };
    let one_minus_e = Mat::identity(n).sub_mat(&e)?;
    let e_prime = one_minus_e.sub_mat(&f.matmul(&solved)?)?;
    Ok(FiniteReduction {
        split,
        e_prime,
        tail_sum: s,
        neumann_depth: None,
        neumann_error: 0.0,
    })
}

/// Dense-rank oracle: kernel and cokernel dimensions of 1 - f computed
/// directly on the full truncated matrix, with no Schur complement.
pub fn dense_kernel_cokernel<T: TraceEntry>(
    t: &TraceClassDecomposition<T>,
    tol: Option<f64>,
) -> (usize, usize) {
    let m = t.to_matrix();
    let one_minus = Mat::identity(t.dim).sub_mat(&m).expect("square");
    let rank = one_minus.rank(tol);
    (t.dim - rank, t.dim - rank)
}
