//! Finite-truncation operator calculus: ell^p norms, diagonal trace-class
//! maps, singular values and Schatten sums, Neumann inversion, the Fredholm
//! reduction of 1 - f, finite spectra, and series functional calculus.

pub mod fredholm;
pub mod mat;
pub mod spectral;

pub use fredholm::{
    dense_kernel_cokernel, fredholm_reduce, fredholm_reduce_exact, neumann_depth,
    neumann_inverse, row_sup_sum, FiniteReduction, FredholmError, TraceClassDecomposition,
};
pub use mat::{Entry, Mat, MatError};
pub use spectral::{
    apply_series, diagonal_mult, diagonal_tail_bound, eigen_residuals, p_norm, row_sum_norm,
    schatten_sum, singular_values, spectrum_finite, SingularSpectrum, SpectralError,
};

use num_rational::BigRational;

/// A finite sequence in float or exact-rational mode. The mode is fixed per
/// computation; rank-critical paths use the exact variant.
#[derive(Debug, Clone, PartialEq)]
pub enum SeqVector {
    Float(Vec<f64>),
    Exact(Vec<BigRational>),
}

impl SeqVector {
    pub fn len(&self) -> usize {
        match self {
            SeqVector::Float(v) => v.len(),
            SeqVector::Exact(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Float view of the entries (exact entries are rounded).
    pub fn to_floats(&self) -> Vec<f64> {
        match self {
            SeqVector::Float(v) => v.clone(),
            SeqVector::Exact(v) => v.iter().map(crate::scalar::rational_to_f64).collect(),
        }
    }
}
