//! Sparse multivariate power series over Q(i), truncated by total degree.
//!
//! All arithmetic is exact. A series stores only nonzero coefficients on
//! exponent vectors of total degree <= `trunc`; every operation re-truncates,
//! so ring identities hold exactly "modulo total degree trunc + 1".

mod norm;
mod parse;

pub use norm::WeightedBound;
pub use parse::parse_series;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{parse_rational, ExactScalar, ScalarRepr};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("series is not a unit (zero constant term)")]
    NonUnit,
    #[error("substitution diverges: inner series has nonzero constant term")]
    Divergence,
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Exponents = Vec<u32>;

/// A truncated power series in `nvars` variables with Gaussian-rational
/// coefficients. Zero coefficients are never stored, so equality is
/// structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSeries {
    nvars: usize,
    trunc: u32,
    terms: BTreeMap<Exponents, ExactScalar>,
}

impl MultiSeries {
    pub fn zero(nvars: usize, trunc: u32) -> Self {
        assert!(nvars >= 1, "series needs at least one variable");
        MultiSeries {
            nvars,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, trunc: u32, c: ExactScalar) -> Self {
        let mut s = Self::zero(nvars, trunc);
        s.insert(vec![0; nvars], c);
        s
    }

    pub fn one(nvars: usize, trunc: u32) -> Self {
        Self::constant(nvars, trunc, ExactScalar::one())
    }

    /// The monomial c * X_var (0-indexed variable).
    pub fn monomial(nvars: usize, trunc: u32, var: usize, c: ExactScalar) -> Self {
        assert!(var < nvars);
        let mut exp = vec![0; nvars];
        exp[var] = 1;
        let mut s = Self::zero(nvars, trunc);
        s.insert(exp, c);
        s
    }

    pub fn from_terms<I>(nvars: usize, trunc: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, ExactScalar)>,
    {
        let mut s = Self::zero(nvars, trunc);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length mismatch");
            s.add_term(&e, c);
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[u32]) -> ExactScalar {
        self.terms.get(exp).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn constant_term(&self) -> ExactScalar {
        self.coeff(&vec![0; self.nvars])
    }

    fn insert(&mut self, exp: Exponents, c: ExactScalar) {
        if !c.is_zero() && total_degree(&exp) <= self.trunc {
            self.terms.insert(exp, c);
        }
    }

    fn add_term(&mut self, exp: &[u32], c: ExactScalar) {
        if c.is_zero() || total_degree(exp) > self.trunc {
            return;
        }
        match self.terms.get_mut(exp) {
            Some(cur) => {
                *cur += &c;
                if cur.is_zero() {
                    self.terms.remove(exp);
                }
            }
            None => {
                self.terms.insert(exp.to_vec(), c);
            }
        }
    }

    fn check_compatible(&self, other: &MultiSeries) -> Result<(), SeriesError> {
        if self.nvars != other.nvars {
            return Err(SeriesError::Dimension(format!(
                "nvars {} vs {}",
                self.nvars, other.nvars
            )));
        }
        if self.trunc != other.trunc {
            return Err(SeriesError::Dimension(format!(
                "trunc {} vs {}",
                self.trunc, other.trunc
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiSeries) -> Result<MultiSeries, SeriesError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiSeries) -> Result<MultiSeries, SeriesError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e, -c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiSeries {
        let mut out = MultiSeries::zero(self.nvars, self.trunc);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &ExactScalar) -> MultiSeries {
        let mut out = MultiSeries::zero(self.nvars, self.trunc);
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.insert(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &MultiSeries) -> Result<MultiSeries, SeriesError> {
        self.check_compatible(other)?;
        let mut out = MultiSeries::zero(self.nvars, self.trunc);
        for (ea, ca) in &self.terms {
            let da = total_degree(ea);
            for (eb, cb) in &other.terms {
                if da + total_degree(eb) > self.trunc {
                    continue;
                }
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(&e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut n: u32) -> MultiSeries {
        let mut base = self.clone();
        let mut acc = MultiSeries::one(self.nvars, self.trunc);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// Re-truncate to a (possibly lower) total-degree bound.
    pub fn truncated(&self, trunc: u32) -> MultiSeries {
        let mut out = MultiSeries::zero(self.nvars, trunc);
        for (e, c) in &self.terms {
            if total_degree(e) <= trunc {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Geometric-series inversion of a unit: f(0) != 0.
    ///
    /// Writes f = c(1 - h) with h(0) = 0 and returns
    /// c^{-1}(1 + h + ... + h^trunc), so f * f^{-1} = 1 modulo degree
    /// trunc + 1.
    pub fn invert_unit(&self) -> Result<MultiSeries, SeriesError> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(SeriesError::NonUnit);
        }
        let c_inv = c.inv().expect("nonzero constant");
        // h = 1 - f/c has zero constant term.
        let scaled = self.scale(&c_inv);
        let h = MultiSeries::one(self.nvars, self.trunc)
            .sub(&scaled)
            .expect("same ring");
        let mut acc = MultiSeries::one(self.nvars, self.trunc);
        let mut power = MultiSeries::one(self.nvars, self.trunc);
        for _ in 0..self.trunc {
            power = power.mul(&h).expect("same ring");
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power).expect("same ring");
        }
        Ok(acc.scale(&c_inv))
    }

    /// Compose f(g_1, ..., g_m) where f has m variables and all g_j live in a
    /// common target ring. Requires every g_j to have zero constant term so
    /// the composition is determined by the stored truncation of f.
    pub fn substitute(&self, args: &[MultiSeries]) -> Result<MultiSeries, SeriesError> {
        for g in args {
            if !g.constant_term().is_zero() {
                return Err(SeriesError::Divergence);
            }
        }
        self.substitute_polynomial(args)
    }

    /// Same composition, but treats the stored terms of f as an exact
    /// polynomial; inner series may then have nonzero constant terms.
    pub fn substitute_polynomial(
        &self,
        args: &[MultiSeries],
    ) -> Result<MultiSeries, SeriesError> {
        if args.len() != self.nvars {
            return Err(SeriesError::Dimension(format!(
                "substitute: {} arguments for {} variables",
                args.len(),
                self.nvars
            )));
        }
        let (tvars, ttrunc) = match args.first() {
            Some(g) => (g.nvars, g.trunc),
            None => return Err(SeriesError::Dimension("substitute: no arguments".into())),
        };
        for g in args {
            if g.nvars != tvars || g.trunc != ttrunc {
                return Err(SeriesError::Dimension(
                    "substitute: inner series live in different rings".into(),
                ));
            }
        }
        // Cache powers of each argument as they are needed.
        let mut powers: Vec<Vec<MultiSeries>> =
            args.iter().map(|g| vec![MultiSeries::one(tvars, ttrunc), g.clone()]).collect();
        let mut out = MultiSeries::zero(tvars, ttrunc);
        for (e, c) in &self.terms {
            let mut term = MultiSeries::constant(tvars, ttrunc, c.clone());
            for (j, &k) in e.iter().enumerate() {
                let k = k as usize;
                while powers[j].len() <= k {
                    let next = powers[j].last().unwrap().mul(&args[j]).expect("same ring");
                    powers[j].push(next);
                }
                term = term.mul(&powers[j][k]).expect("same ring");
            }
            out = out.add(&term).expect("same ring");
        }
        Ok(out)
    }

    /// Restrict a series to its first variable: keep terms whose exponents
    /// vanish outside variable 0, returned as a univariate series.
    pub fn restrict_to_first(&self) -> MultiSeries {
        let mut out = MultiSeries::zero(1, self.trunc);
        for (e, c) in &self.terms {
            if e[1..].iter().all(|&k| k == 0) {
                out.terms.insert(vec![e[0]], c.clone());
            }
        }
        out
    }

    /// Total degree of the lowest-degree nonzero term, if any.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(|e| total_degree(e)).min()
    }
}

pub fn total_degree(exp: &[u32]) -> u32 {
    exp.iter().sum()
}

/// Division of a two-variable series F(T, U) by U - T:
/// F = (U - T) * Q + R with R = F(T, T) free of U. The identity is exact at
/// truncation because deleting the diagonal leaves a multiple of U - T.
pub fn divide_diagonal(f: &MultiSeries) -> Result<(MultiSeries, MultiSeries), SeriesError> {
    if f.nvars != 2 {
        return Err(SeriesError::Dimension(format!(
            "divide_diagonal needs exactly two variables, got {}",
            f.nvars
        )));
    }
    let trunc = f.trunc;
    // R(T) = F(T, T); total degree is preserved, so no truncation loss.
    let mut r = MultiSeries::zero(1, trunc);
    for (e, c) in &f.terms {
        r.add_term(&[e[0] + e[1]], c.clone());
    }
    // Q = sum over terms c T^n U^m of c T^n (U^{m-1} + U^{m-2} T + ... + T^{m-1}),
    // from U^m - T^m = (U - T) (U^{m-1} + ... + T^{m-1}).
    let mut q = MultiSeries::zero(2, trunc);
    for (e, c) in &f.terms {
        let (n, m) = (e[0], e[1]);
        for j in 0..m {
            q.add_term(&[n + m - 1 - j, j], c.clone());
        }
    }
    Ok((q, r))
}

/// Embed R back into the two-variable ring (as a series in T) so callers can
/// verify F = (U - T) Q + R inside one ring.
pub fn embed_univariate(r: &MultiSeries, nvars: usize, var: usize, trunc: u32) -> MultiSeries {
    assert_eq!(r.nvars, 1);
    let mut out = MultiSeries::zero(nvars, trunc);
    for (e, c) in &r.terms {
        let mut exp = vec![0; nvars];
        exp[var] = e[0];
        out.add_term(&exp, c.clone());
    }
    out
}

/// JSON face of a series (sparse list of exponent/coefficient records).
#[derive(Serialize, Deserialize)]
pub struct SeriesRepr {
    pub nvars: usize,
    pub trunc: u32,
    pub terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
pub struct TermRepr {
    pub exp: Vec<u32>,
    #[serde(flatten)]
    pub coeff: ScalarRepr,
}

impl From<&MultiSeries> for SeriesRepr {
    fn from(s: &MultiSeries) -> Self {
        SeriesRepr {
            nvars: s.nvars,
            trunc: s.trunc,
            terms: s
                .terms
                .iter()
                .map(|(e, c)| TermRepr {
                    exp: e.clone(),
                    coeff: ScalarRepr::from(c),
                })
                .collect(),
        }
    }
}

impl TryFrom<&SeriesRepr> for MultiSeries {
    type Error = SeriesError;
    fn try_from(r: &SeriesRepr) -> Result<Self, SeriesError> {
        if r.nvars == 0 {
            return Err(SeriesError::Dimension("nvars must be >= 1".into()));
        }
        let mut s = MultiSeries::zero(r.nvars, r.trunc);
        for t in &r.terms {
            if t.exp.len() != r.nvars {
                return Err(SeriesError::Dimension(format!(
                    "exponent vector of length {} in a {}-variable series",
                    t.exp.len(),
                    r.nvars
                )));
            }
            let c = ExactScalar::try_from(&t.coeff)
                .map_err(|e| SeriesError::Parse { pos: 0, msg: e.to_string() })?;
            s.add_term(&t.exp, c);
        }
        Ok(s)
    }
}

// Display is only used in reports and error messages; keep it simple.
impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (j, &k) in e.iter().enumerate() {
                if k > 0 {
                    write!(f, "*x{}", j + 1)?;
                    if k > 1 {
                        write!(f, "^{}", k)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parse a rational parameter such as a radius or the norm exponent p.
pub fn parse_positive_rational(text: &str) -> Result<BigRational, SeriesError> {
    let r = parse_rational(text).map_err(|e| SeriesError::Parse { pos: 0, msg: e.to_string() })?;
    if r <= BigRational::zero() {
        return Err(SeriesError::Parameter(format!("{text} is not positive")));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str, nvars: usize, trunc: u32) -> MultiSeries {
        parse_series(text, nvars, trunc).unwrap()
    }

    #[test]
    fn mul_difference_of_squares() {
        let a = s("1 + T", 1, 2);
        let b = s("1 - T", 1, 2);
        assert_eq!(a.mul(&b).unwrap(), s("1 - T^2", 1, 2));
    }

    #[test]
    fn mul_truncates_at_degree_bound() {
        let a = s("1 + T", 1, 1);
        assert_eq!(a.mul(&a).unwrap(), s("1 + 2T", 1, 1));
    }

    #[test]
    fn mismatched_rings_error() {
        let a = s("1", 1, 2);
        let b = s("1", 2, 2);
        let c = s("1", 1, 3);
        assert!(matches!(a.mul(&b), Err(SeriesError::Dimension(_))));
        assert!(matches!(a.add(&c), Err(SeriesError::Dimension(_))));
    }

    #[test]
    fn invert_geometric() {
        let f = s("1 - T", 1, 3);
        assert_eq!(f.invert_unit().unwrap(), s("1 + T + T^2 + T^3", 1, 3));
    }

    #[test]
    fn invert_constant() {
        let f = s("2", 1, 3);
        assert_eq!(f.invert_unit().unwrap(), s("1/2", 1, 3));
    }

    #[test]
    fn invert_roundtrip_example() {
        let f = s("1 + T + T^2", 1, 3);
        let inv = f.invert_unit().unwrap();
        assert_eq!(inv, s("1 - T + T^3", 1, 3));
        assert_eq!(f.mul(&inv).unwrap(), MultiSeries::one(1, 3));
    }

    #[test]
    fn invert_non_unit_errors() {
        let f = s("T", 1, 3);
        assert_eq!(f.invert_unit(), Err(SeriesError::NonUnit));
    }

    #[test]
    fn substitute_square() {
        let f = s("1 + T", 1, 4);
        let g = s("T^2", 1, 4);
        assert_eq!(f.substitute(&[g]).unwrap(), s("1 + T^2", 1, 4));
    }

    #[test]
    fn substitute_rescales_coefficients() {
        let f = s("1 + T + T^2 + T^3", 1, 3);
        let g = s("1/2 T", 1, 3);
        assert_eq!(
            f.substitute(&[g]).unwrap(),
            s("1 + 1/2 T + 1/4 T^2 + 1/8 T^3", 1, 3)
        );
    }

    #[test]
    fn substitute_truncated_geometric() {
        // f = 1/(1-T) stored to degree 2, g = T + T^2.
        let f = s("1 + T + T^2", 1, 2);
        let g = s("T + T^2", 1, 2);
        assert_eq!(f.substitute(&[g]).unwrap(), s("1 + T + 2T^2", 1, 2));
    }

    #[test]
    fn substitute_divergent_inner_rejected() {
        let f = s("1 + T", 1, 2);
        let g = s("1 + T", 1, 2);
        assert_eq!(f.substitute(std::slice::from_ref(&g)), Err(SeriesError::Divergence));
        // Polynomial mode evaluates the stored terms exactly.
        assert_eq!(f.substitute_polynomial(&[g]).unwrap(), s("2 + T", 1, 2));
    }

    #[test]
    fn diagonal_difference_of_squares() {
        let f = s("U^2 - T^2", 2, 4);
        let (q, r) = divide_diagonal(&f).unwrap();
        assert_eq!(q, s("U + T", 2, 4));
        assert!(r.is_zero());
    }

    #[test]
    fn diagonal_single_u() {
        let f = s("U", 2, 3);
        let (q, r) = divide_diagonal(&f).unwrap();
        assert_eq!(q, s("1", 2, 3));
        assert_eq!(r, s("T", 1, 3));
    }

    #[test]
    fn diagonal_cross_term() {
        let f = s("U*T", 2, 3);
        let (q, r) = divide_diagonal(&f).unwrap();
        assert_eq!(q, s("T", 2, 3));
        assert_eq!(r, s("T^2", 1, 3));
    }

    #[test]
    fn diagonal_needs_two_variables() {
        assert!(divide_diagonal(&s("T", 1, 3)).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let f = s("1 - 2/3*x1^2*x2 + (1+1i)*x2^3", 2, 5);
        let repr = SeriesRepr::from(&f);
        let text = serde_json::to_string(&repr).unwrap();
        let back: SeriesRepr = serde_json::from_str(&text).unwrap();
        assert_eq!(MultiSeries::try_from(&back).unwrap(), f);
    }
}
