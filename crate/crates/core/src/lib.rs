//! Exact computational kernels behind a desk-scale Riemann-Roch verifier:
//! truncated multivariate power series over the Gaussian rationals,
//! Weierstrass preparation, finite-truncation operator calculus, Koszul-complex
//! Hochschild homology, a characteristic-class engine with HRR/GRR checks, and
//! a sound containment prover for formal closed subsets.

pub mod catalog;
pub mod charclasses;
pub mod cli;
pub mod hochschild;
pub mod locale;
pub mod operators;
pub mod scalar;
pub mod series;
pub mod weierstrass;

pub use scalar::ExactScalar;
pub use series::MultiSeries;
