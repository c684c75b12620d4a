//! Formal closed subsets {|f| <= r}, {|f| >= r} over a polynomial term
//! language, and a sound forward-chaining prover for containment and
//! emptiness.
//!
//! Semantics: symbols take values in Q(i) and |.| is the complex modulus
//! (compared exactly through squares). Scalar side conditions use the
//! rational surrogate sharp(a + bi) = |a| + |b| with its factor-2 slack
//! folded in, so every rule is sound for the true modulus. The prover
//! guarantees soundness via replayable traces; completeness is not claimed.

mod parse;
mod saturate;

pub use parse::{parse_expr, parse_term};
pub use saturate::{
    decide_containment, decide_empty, replay_trace, saturate, Decision, EmptyDecision, FactBase,
    Rule, TraceStep,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::scalar::{format_rational, ExactScalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LocaleError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Parameter(String),
}

/// Monomial in named symbols.
pub type SymMonomial = BTreeMap<String, u32>;

/// A polynomial with Gaussian-rational coefficients in named symbols, kept
/// in canonical expanded form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Term {
    terms: BTreeMap<SymMonomial, ExactScalar>,
}

impl Term {
    pub fn zero() -> Self {
        Term {
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(c: ExactScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(SymMonomial::new(), c);
        }
        Term { terms }
    }

    pub fn symbol(name: &str) -> Self {
        let mut mono = SymMonomial::new();
        mono.insert(name.to_string(), 1);
        let mut terms = BTreeMap::new();
        terms.insert(mono, ExactScalar::one());
        Term { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Some(c) when the term is a constant polynomial (including zero).
    pub fn as_scalar(&self) -> Option<ExactScalar> {
        match self.terms.len() {
            0 => Some(ExactScalar::zero()),
            1 => {
                let (mono, c) = self.terms.iter().next().unwrap();
                if mono.is_empty() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn add(&self, other: &Term) -> Term {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(ExactScalar::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Term { terms }
    }

    pub fn neg(&self) -> Term {
        Term {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Term) -> Term {
        let mut terms: BTreeMap<SymMonomial, ExactScalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut mono = ma.clone();
                for (sym, k) in mb {
                    *mono.entry(sym.clone()).or_insert(0) += k;
                }
                let entry = terms.entry(mono).or_insert_with(ExactScalar::zero);
                *entry += &(ca * cb);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Term { terms }
    }

    pub fn scale(&self, c: &ExactScalar) -> Term {
        if c.is_zero() {
            return Term::zero();
        }
        Term {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    /// All symbol names occurring in the term.
    pub fn symbols(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.keys().cloned())
            .collect()
    }

    /// Exact evaluation at a Q(i) point; missing symbols default to zero.
    pub fn eval(&self, point: &BTreeMap<String, ExactScalar>) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for (mono, c) in &self.terms {
            let mut v = c.clone();
            for (sym, &k) in mono {
                let x = point.get(sym).cloned().unwrap_or_else(ExactScalar::zero);
                for _ in 0..k {
                    v *= &x;
                }
            }
            acc += &v;
        }
        acc
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (sym, &k) in mono {
                write!(f, "*{}", sym)?;
                if k > 1 {
                    write!(f, "^{}", k)?;
                }
            }
        }
        Ok(())
    }
}

/// Which closed condition an atom imposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AtomKind {
    Le,
    Ge,
}

/// {|term| <= r} or {|term| >= r} for a positive rational radius.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Atom {
    pub term: Term,
    pub kind: AtomKind,
    pub radius: BigRational,
}

impl Atom {
    pub fn new(term: Term, kind: AtomKind, radius: BigRational) -> Result<Self, LocaleError> {
        if !radius.is_positive() {
            return Err(LocaleError::Parameter(format!(
                "radius {} must be positive",
                format_rational(&radius)
            )));
        }
        Ok(Atom { term, kind, radius })
    }

    pub fn le(term: Term, radius: BigRational) -> Result<Self, LocaleError> {
        Atom::new(term, AtomKind::Le, radius)
    }

    pub fn ge(term: Term, radius: BigRational) -> Result<Self, LocaleError> {
        Atom::new(term, AtomKind::Ge, radius)
    }

    /// Exact satisfaction at a Q(i) point: |t(x)| compared with the radius
    /// through squares.
    pub fn satisfied_at(&self, point: &BTreeMap<String, ExactScalar>) -> bool {
        let value_sq = self.term.eval(point).abs_sq();
        let radius_sq = &self.radius * &self.radius;
        match self.kind {
            AtomKind::Le => value_sq <= radius_sq,
            AtomKind::Ge => value_sq >= radius_sq,
        }
    }

    /// Tautology check for scalar terms via the surrogate absolute value:
    /// sharp(a) <= r certifies |a| <= r, and sharp(a) >= 2r certifies
    /// |a| >= r.
    pub fn scalar_tautology(&self) -> bool {
        match self.term.as_scalar() {
            None => false,
            Some(c) => {
                let sharp = c.sharp_abs();
                match self.kind {
                    AtomKind::Le => sharp <= self.radius,
                    AtomKind::Ge => {
                        sharp >= BigRational::from_integer(2.into()) * &self.radius
                    }
                }
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.kind {
            AtomKind::Le => "<=",
            AtomKind::Ge => ">=",
        };
        write!(f, "|{}| {} {}", self.term, op, format_rational(&self.radius))
    }
}

/// A finite intersection of atoms; the empty intersection is the whole
/// space. Atoms are deduplicated by (term, kind, radius).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubsetExpr {
    pub atoms: BTreeSet<Atom>,
}

impl SubsetExpr {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Self {
        SubsetExpr {
            atoms: atoms.into_iter().collect(),
        }
    }

    pub fn whole_space() -> Self {
        SubsetExpr::default()
    }

    pub fn satisfied_at(&self, point: &BTreeMap<String, ExactScalar>) -> bool {
        self.atoms.iter().all(|a| a.satisfied_at(point))
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        self.atoms
            .iter()
            .flat_map(|a| a.term.symbols())
            .collect()
    }
}

impl fmt::Display for SubsetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "(whole space)");
        }
        let mut first = true;
        for atom in &self.atoms {
            if !first {
                write!(f, " & ")?;
            }
            first = false;
            write!(f, "{}", atom)?;
        }
        Ok(())
    }
}
