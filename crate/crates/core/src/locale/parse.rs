//! Grammar: expr := atom ("&" atom)* ; atom := "|" poly "|" ("<=" | ">=")
//! rational. Polynomials use named symbols, Gaussian-rational coefficients,
//! `+ - * ^` and parentheses; the bare letter `i` is the imaginary unit.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{Atom, AtomKind, LocaleError, SubsetExpr, Term};
use crate::scalar::ExactScalar;

pub fn parse_expr(text: &str) -> Result<SubsetExpr, LocaleError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let mut atoms = Vec::new();
    loop {
        atoms.push(p.parse_atom()?);
        p.skip_ws();
        if p.pos >= p.bytes.len() {
            break;
        }
        if !p.eat(b'&') {
            return Err(p.err("expected `&` between atoms"));
        }
    }
    Ok(SubsetExpr::new(atoms))
}

/// Parse a bare polynomial term (used by tests and the C API).
pub fn parse_term(text: &str) -> Result<Term, LocaleError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let t = p.parse_poly()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("trailing input after term"));
    }
    Ok(t)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> LocaleError {
        LocaleError::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_atom(&mut self) -> Result<Atom, LocaleError> {
        if !self.eat(b'|') {
            return Err(self.err("expected `|` opening an atom"));
        }
        let term = self.parse_poly()?;
        if !self.eat(b'|') {
            return Err(self.err("expected `|` closing an atom"));
        }
        let kind = match self.peek() {
            Some(b'<') => {
                self.pos += 1;
                if !self.eat(b'=') {
                    return Err(self.err("expected `<=`"));
                }
                AtomKind::Le
            }
            Some(b'>') => {
                self.pos += 1;
                if !self.eat(b'=') {
                    return Err(self.err("expected `>=`"));
                }
                AtomKind::Ge
            }
            _ => return Err(self.err("expected `<=` or `>=`")),
        };
        let radius = self.parse_signed_rational()?;
        if !radius.is_positive() {
            return Err(self.err("radius must be a positive rational"));
        }
        Atom::new(term, kind, radius).map_err(|e| match e {
            LocaleError::Parameter(msg) => LocaleError::Parse {
                pos: self.pos,
                msg,
            },
            other => other,
        })
    }

    fn parse_poly(&mut self) -> Result<Term, LocaleError> {
        let mut acc = Term::zero();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(_) if first => false,
                _ if first => return Err(self.err("expected a polynomial")),
                _ => break,
            };
            first = false;
            let term = self.parse_product()?;
            acc = if sign { acc.add(&term.neg()) } else { acc.add(&term) };
            match self.peek() {
                Some(b'+') | Some(b'-') => continue,
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_product(&mut self) -> Result<Term, LocaleError> {
        let mut acc = self.parse_power()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.parse_power()?;
                acc = acc.mul(&rhs);
            } else {
                // juxtaposition: `2f`, `f g` are accepted
                match self.peek() {
                    Some(c) if c.is_ascii_alphabetic() || c == b'(' => {
                        let rhs = self.parse_power()?;
                        acc = acc.mul(&rhs);
                    }
                    _ => break,
                }
            }
        }
        Ok(acc)
    }

    fn parse_power(&mut self) -> Result<Term, LocaleError> {
        let base = self.parse_factor()?;
        if self.eat(b'^') {
            let exp = self.parse_uint()?;
            let mut acc = Term::scalar(ExactScalar::one());
            for _ in 0..exp {
                acc = acc.mul(&base);
            }
            Ok(acc)
        } else {
            Ok(base)
        }
    }

    fn parse_factor(&mut self) -> Result<Term, LocaleError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_poly()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let r = self.parse_rational()?;
                if self.peek() == Some(b'i') {
                    self.pos += 1;
                    Ok(Term::scalar(ExactScalar::new(BigRational::zero(), r)))
                } else {
                    Ok(Term::scalar(ExactScalar::new(r, BigRational::zero())))
                }
            }
            Some(b'i') => {
                // lone imaginary unit unless it starts a longer identifier
                let next = self.bytes.get(self.pos + 1).copied();
                if next.is_none_or(|c| !c.is_ascii_alphanumeric() && c != b'_') {
                    self.pos += 1;
                    Ok(Term::scalar(ExactScalar::i()))
                } else {
                    Ok(Term::symbol(&self.parse_ident()?))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => Ok(Term::symbol(&self.parse_ident()?)),
            _ => Err(self.err("expected a factor")),
        }
    }

    fn parse_ident(&mut self) -> Result<String, LocaleError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an identifier"));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .to_string())
    }

    fn parse_signed_rational(&mut self) -> Result<BigRational, LocaleError> {
        let neg = self.eat(b'-');
        let r = self.parse_rational()?;
        Ok(if neg { -r } else { r })
    }

    fn parse_rational(&mut self) -> Result<BigRational, LocaleError> {
        let num = self.parse_uint()?;
        if self.eat(b'/') {
            let den = self.parse_uint()?;
            if den == 0 {
                return Err(self.err("zero denominator"));
            }
            Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
        } else {
            Ok(BigRational::from_integer(BigInt::from(num)))
        }
    }

    fn parse_uint(&mut self) -> Result<u64, LocaleError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number overflows"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn two_atom_intersection() {
        let e = parse_expr("|f|<=1 & |g|<=1").unwrap();
        assert_eq!(e.atoms.len(), 2);
    }

    #[test]
    fn product_term_atom() {
        let e = parse_expr("|f*g|>=1/2").unwrap();
        let atom = e.atoms.iter().next().unwrap();
        assert_eq!(atom.kind, AtomKind::Ge);
        assert_eq!(atom.term, Term::symbol("f").mul(&Term::symbol("g")));
    }

    #[test]
    fn symbolic_radius_rejected() {
        let err = parse_expr("|f+g|<=x").unwrap_err();
        assert!(matches!(err, LocaleError::Parse { .. }));
    }

    #[test]
    fn gaussian_coefficients() {
        let t = parse_term("(1+1i)*f - 2i*g^2").unwrap();
        let expected = Term::symbol("f")
            .scale(&ExactScalar::new(BigRational::one(), BigRational::one()))
            .add(
                &Term::symbol("g")
                    .mul(&Term::symbol("g"))
                    .scale(&ExactScalar::new(
                        BigRational::zero(),
                        -BigRational::from_integer(2.into()),
                    )),
            );
        assert_eq!(t, expected);
    }

    #[test]
    fn duplicate_atoms_deduplicate() {
        let e = parse_expr("|f|<=1 & |f|<=1").unwrap();
        assert_eq!(e.atoms.len(), 1);
    }
}
