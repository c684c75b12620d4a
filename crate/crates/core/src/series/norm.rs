//! Radius-weighted p-norms of truncated series.
//!
//! value = sum_I (sharp(a_I) * r^I)^p over stored terms, where sharp is the
//! rational surrogate |a| + |b| for a + bi. For p = a/b the b-th root of a
//! rational is taken exactly when it exists; otherwise the reported value is
//! a certified rational upper bound (ceil/floor integer roots).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{MultiSeries, SeriesError};

/// The result of a weighted-norm evaluation; `exact` records whether `value`
/// is the exact sum or a certified upper bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedBound {
    pub radii: Vec<BigRational>,
    pub p: BigRational,
    pub value: BigRational,
    pub exact: bool,
}

impl MultiSeries {
    /// Weighted p-norm with per-variable radii and exponent 0 < p <= 1.
    pub fn weighted_norm(
        &self,
        radii: &[BigRational],
        p: &BigRational,
    ) -> Result<WeightedBound, SeriesError> {
        if radii.len() != self.nvars() {
            return Err(SeriesError::Dimension(format!(
                "{} radii for {} variables",
                radii.len(),
                self.nvars()
            )));
        }
        if radii.iter().any(|r| !r.is_positive()) {
            return Err(SeriesError::Parameter("radii must be positive".into()));
        }
        if !p.is_positive() || p > &BigRational::one() {
            return Err(SeriesError::Parameter(format!("p = {p} outside (0, 1]")));
        }
        let mut value = BigRational::zero();
        let mut exact = true;
        for (e, c) in self.terms() {
            let mut w = c.sharp_abs();
            for (j, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    w *= &radii[j];
                }
            }
            let (pw, was_exact) = rational_pow_upper(&w, p);
            value += pw;
            exact &= was_exact;
        }
        Ok(WeightedBound {
            radii: radii.to_vec(),
            p: p.clone(),
            value,
            exact,
        })
    }
}

/// x^(a/b) for x >= 0 and a/b in lowest terms. Returns (value, true) when the
/// b-th root of x^a is rational, else (certified upper bound, false).
fn rational_pow_upper(x: &BigRational, p: &BigRational) -> (BigRational, bool) {
    if x.is_zero() {
        return (BigRational::zero(), true);
    }
    let a = p.numer().to_u32().expect("norm exponent numerator fits u32");
    let b = p.denom().to_u32().expect("norm exponent denominator fits u32");
    let xa = pow_rational(x, a);
    if b == 1 {
        return (xa, true);
    }
    let num_root = exact_nth_root(xa.numer(), b);
    let den_root = exact_nth_root(xa.denom(), b);
    match (num_root, den_root) {
        (Ok(n), Ok(d)) => (BigRational::new(n, d), true),
        (n, d) => {
            // ceil root of the numerator over floor root of the denominator
            // over-approximates the true value.
            let n = match n {
                Ok(v) => v,
                Err(floor) => floor + 1,
            };
            let d = match d {
                Ok(v) => v,
                Err(floor) => floor,
            };
            (BigRational::new(n, d), false)
        }
    }
}

fn pow_rational(x: &BigRational, n: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..n {
        acc *= x;
    }
    acc
}

/// Ok(root) when n is a perfect b-th power, Err(floor of the root) otherwise.
fn exact_nth_root(n: &BigInt, b: u32) -> Result<BigInt, BigInt> {
    let root = n.nth_root(b);
    if num_traits::pow(root.clone(), b as usize) == *n {
        Ok(root)
    } else {
        Err(root)
    }
}
