//! SVD-based Schatten data, finite spectra, and power-series functional
//! calculus on finite matrices. Floating point is confined to this file and
//! the float mode of the Fredholm path; rank-critical work stays exact.

use nalgebra::{Complex, DMatrix, DVector};
use thiserror::Error;

use crate::series::MultiSeries;

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("SVD iteration failed to converge")]
    SvdDiverged,
    #[error("orthogonality residual {0} exceeds 1e-9")]
    NotOrthogonal(f64),
    #[error("operator norm {norm} is not below the radius certificate {radius}")]
    Domain { norm: f64, radius: f64 },
    #[error("matrix must be square, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("series for functional calculus must be univariate")]
    NotUnivariate,
}

/// Singular values sorted nonincreasing, with Schatten p-sums on demand.
#[derive(Debug, Clone)]
pub struct SingularSpectrum {
    pub sigma: Vec<f64>,
}

impl SingularSpectrum {
    /// sum_n sigma_n^p, the p-Schatten sum (p <= 1 convention: no root).
    pub fn schatten(&self, p: f64) -> f64 {
        self.sigma.iter().map(|s| s.powf(p)).sum()
    }
}

/// Orthogonality guard for the returned factors.
const ORTHO_TOL: f64 = 1e-9;

/// Singular values of a finite real matrix, validated against the
/// orthogonality of the computed factors.
pub fn singular_values(a: &DMatrix<f64>) -> Result<SingularSpectrum, SpectralError> {
    let svd = a
        .clone()
        .try_svd(true, true, f64::EPSILON, 10_000)
        .ok_or(SpectralError::SvdDiverged)?;
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let residual = orthogonality_residual(u).max(orthogonality_residual(&v_t.transpose()));
    if residual > ORTHO_TOL {
        return Err(SpectralError::NotOrthogonal(residual));
    }
    let mut sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    sigma.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
    Ok(SingularSpectrum { sigma })
}

fn orthogonality_residual(q: &DMatrix<f64>) -> f64 {
    let gram = q.transpose() * q;
    let n = gram.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - expect).abs());
        }
    }
    worst
}

/// sum_n sigma_n(A)^p.
pub fn schatten_sum(a: &DMatrix<f64>, p: f64) -> Result<f64, SpectralError> {
    Ok(singular_values(a)?.schatten(p))
}

/// Complex eigenvalues of a finite square matrix.
pub fn spectrum_finite(a: &DMatrix<f64>) -> Result<Vec<Complex<f64>>, SpectralError> {
    if a.nrows() != a.ncols() {
        return Err(SpectralError::NotSquare(a.nrows(), a.ncols()));
    }
    Ok(a.complex_eigenvalues().iter().copied().collect())
}

/// Residual ||Av - lambda v|| / ||v|| for each reported eigenvalue, via a few
/// rounds of shifted inverse iteration.
pub fn eigen_residuals(a: &DMatrix<f64>, eigenvalues: &[Complex<f64>]) -> Vec<f64> {
    let n = a.nrows();
    let ac = a.map(|x| Complex::new(x, 0.0));
    eigenvalues
        .iter()
        .map(|&lambda| {
            // Tiny shift keeps the solve nonsingular at an exact eigenvalue.
            let shift = lambda + Complex::new(1e-10, 1e-10);
            let shifted = &ac - DMatrix::<Complex<f64>>::identity(n, n) * shift;
            let lu = shifted.clone().lu();
            let mut v = DVector::<Complex<f64>>::from_element(n, Complex::new(1.0, 0.0));
            v /= Complex::new(v.norm(), 0.0);
            for _ in 0..3 {
                if let Some(next) = lu.solve(&v) {
                    let norm = next.norm();
                    if norm.is_finite() && norm > 0.0 {
                        v = next / Complex::new(norm, 0.0);
                    }
                }
            }
            (&ac * &v - &v * lambda).norm()
        })
        .collect()
}

/// Entrywise product of a weight sequence with a bounded sequence.
pub fn diagonal_mult(lambda: &[f64], x: &[f64]) -> Vec<f64> {
    lambda.iter().zip(x).map(|(l, v)| l * v).collect()
}

/// The tail estimate 2^p C^p sum_{i >= head} |lambda_i|^p that certifies
/// continuity of the diagonal map on the C-ball.
pub fn diagonal_tail_bound(lambda: &[f64], head: usize, p: f64, c: f64) -> f64 {
    let tail: f64 = lambda.iter().skip(head).map(|l| l.abs().powf(p)).sum();
    2f64.powf(p) * c.powf(p) * tail
}

/// ell^p norm with the dual convention: plain p-sum for p <= 1, p-th root for
/// p > 1.
pub fn p_norm(x: &[f64], p: f64) -> Result<f64, SpectralError> {
    if p.is_nan() || p <= 0.0 {
        return Err(SpectralError::Domain {
            norm: p,
            radius: 0.0,
        });
    }
    let sum: f64 = x.iter().map(|v| v.abs().powf(p)).sum();
    Ok(if p <= 1.0 { sum } else { sum.powf(1.0 / p) })
}

/// Evaluate a truncated univariate series on a matrix: sum a_n A^n by Horner,
/// with the geometric tail bound C (||A||/r')^{N+1} / (1 - ||A||/r') for the
/// declared coefficient certificate sup_n sharp(a_n) r'^n <= C.
pub fn apply_series(
    f: &MultiSeries,
    r_prime: f64,
    a: &DMatrix<f64>,
) -> Result<(DMatrix<Complex<f64>>, f64), SpectralError> {
    if f.nvars() != 1 {
        return Err(SpectralError::NotUnivariate);
    }
    if a.nrows() != a.ncols() {
        return Err(SpectralError::NotSquare(a.nrows(), a.ncols()));
    }
    let norm = row_sum_norm(a);
    if norm.is_nan() || r_prime.is_nan() || norm >= r_prime {
        return Err(SpectralError::Domain {
            norm,
            radius: r_prime,
        });
    }
    let n = a.nrows();
    let trunc = f.trunc() as usize;
    let mut coeffs = vec![Complex::new(0.0, 0.0); trunc + 1];
    let mut certificate = 0.0f64;
    for (e, c) in f.terms() {
        let (re, im) = c.to_f64_parts();
        coeffs[e[0] as usize] = Complex::new(re, im);
        let sharp = re.abs() + im.abs();
        certificate = certificate.max(sharp * r_prime.powi(e[0] as i32));
    }
    let ac = a.map(|x| Complex::new(x, 0.0));
    let mut acc = DMatrix::<Complex<f64>>::zeros(n, n);
    for k in (0..=trunc).rev() {
        acc = &ac * acc;
        for i in 0..n {
            acc[(i, i)] += coeffs[k];
        }
    }
    let ratio = norm / r_prime;
    let tail = certificate * ratio.powi(trunc as i32 + 1) / (1.0 - ratio);
    Ok((acc, tail))
}

/// Operator norm on sup-normed vectors: max row sum of absolute entries.
pub fn row_sum_norm(a: &DMatrix<f64>) -> f64 {
    (0..a.nrows())
        .map(|i| a.row(i).iter().map(|x| x.abs()).sum())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::parse_series;

    #[test]
    fn diagonal_matrix_singular_values() {
        let a = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, 4.0]);
        let s = singular_values(&a).unwrap();
        assert!((s.sigma[0] - 4.0).abs() < 1e-12);
        assert!((s.sigma[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn jordan_block_singular_values() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let s = singular_values(&a).unwrap();
        assert!((s.sigma[0] - 1.0).abs() < 1e-12);
        assert!(s.sigma[1].abs() < 1e-12);
    }

    #[test]
    fn schatten_sums_of_diagonal() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 0., 0., 0., 0.5, 0., 0., 0., 0.25]);
        assert!((schatten_sum(&a, 1.0).unwrap() - 1.75).abs() < 1e-12);
        assert!((schatten_sum(&a, 2.0).unwrap() - 21.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_spectrum_is_plus_minus_i() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let mut eig = spectrum_finite(&a).unwrap();
        eig.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((eig[0] - Complex::new(0.0, -1.0)).norm() < 1e-10);
        assert!((eig[1] - Complex::new(0.0, 1.0)).norm() < 1e-10);
        let residuals = eigen_residuals(&a, &eig);
        assert!(residuals.iter().all(|&r| r <= 1e-8));
    }

    #[test]
    fn nilpotent_spectrum_is_zero() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let eig = spectrum_finite(&a).unwrap();
        assert!(eig.iter().all(|l| l.norm() < 1e-10));
    }

    #[test]
    fn p_norm_conventions() {
        assert!((p_norm(&[1.0, 0.5, 0.25, 0.125], 1.0).unwrap() - 1.875).abs() < 1e-12);
        assert!((p_norm(&[3.0, 4.0], 2.0).unwrap() - 5.0).abs() < 1e-12);
        assert!(p_norm(&[1.0], 0.0).is_err());
    }

    #[test]
    fn diagonal_tail_bound_dominates() {
        let lambda: Vec<f64> = (0..30).map(|n| 0.5f64.powi(n)).collect();
        let x = vec![1.0; 30];
        let product = diagonal_mult(&lambda, &x);
        let p = 0.5;
        let measured: f64 = product.iter().skip(10).map(|v| v.abs().powf(p)).sum();
        let bound = diagonal_tail_bound(&lambda, 10, p, 1.0);
        assert!(measured <= bound + 1e-15);
    }

    #[test]
    fn exp_series_on_nilpotent() {
        // exp to degree 3 on a nilpotent block is 1 + N.
        let f = parse_series("1 + T + 1/2 T^2 + 1/6 T^3", 1, 3).unwrap();
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let (m, _tail) = apply_series(&f, 4.0, &a).unwrap();
        assert!((m[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!((m[(0, 1)].re - 1.0).abs() < 1e-12);
        assert!((m[(1, 1)].re - 1.0).abs() < 1e-12);
        assert!(m[(1, 0)].norm() < 1e-12);
    }

    #[test]
    fn constant_series_gives_scalar_matrix() {
        let f = parse_series("5", 1, 3).unwrap();
        let a = DMatrix::from_row_slice(2, 2, &[0.1, 0.0, 0.0, 0.1]);
        let (m, tail) = apply_series(&f, 1.0, &a).unwrap();
        assert!((m[(0, 0)].re - 5.0).abs() < 1e-12);
        assert!(m[(0, 1)].norm() < 1e-12);
        assert!(tail >= 0.0);
    }

    #[test]
    fn apply_series_domain_check() {
        let f = parse_series("1 + T", 1, 1).unwrap();
        let a = DMatrix::from_row_slice(1, 1, &[2.0]);
        assert!(matches!(
            apply_series(&f, 1.0, &a),
            Err(SpectralError::Domain { .. })
        ));
    }
}
