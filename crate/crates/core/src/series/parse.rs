//! Hand-rolled parser for the human series syntax, e.g.
//! `1 - 2/3*x1^2*x2 + (1+1i)*x2^3`. Variables are x1..xn; `T` and `U` are
//! accepted as aliases for x1 and x2.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{MultiSeries, SeriesError};
use crate::scalar::ExactScalar;

pub fn parse_series(text: &str, nvars: usize, trunc: u32) -> Result<MultiSeries, SeriesError> {
    Parser {
        bytes: text.as_bytes(),
        pos: 0,
        nvars,
    }
    .parse(trunc)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> SeriesError {
        SeriesError::Parse {
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

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse(mut self, trunc: u32) -> Result<MultiSeries, SeriesError> {
        let mut out = MultiSeries::zero(self.nvars, trunc);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if first => break,
                None => return Err(self.err("trailing operator")),
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(_) if first => false,
                Some(c) => return Err(self.err(format!("expected + or -, found `{}`", c as char))),
            };
            first = false;
            let (coeff, exp) = self.parse_term()?;
            let coeff = if sign { -coeff } else { coeff };
            out.add_term(&exp, coeff);
            if self.peek().is_none() {
                break;
            }
        }
        Ok(out)
    }

    /// One product of factors: an optional coefficient and variable powers.
    fn parse_term(&mut self) -> Result<(ExactScalar, Vec<u32>), SeriesError> {
        let mut coeff = ExactScalar::one();
        let mut exp = vec![0u32; self.nvars];
        let mut any = false;
        loop {
            match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    coeff = &coeff * &self.parse_gaussian()?;
                    if !self.eat(b')') {
                        return Err(self.err("expected `)`"));
                    }
                }
                Some(c) if c.is_ascii_digit() => {
                    let r = self.parse_number()?;
                    let z = if self.eat(b'i') {
                        ExactScalar::new(BigRational::zero(), r)
                    } else {
                        ExactScalar::new(r, BigRational::zero())
                    };
                    coeff = &coeff * &z;
                }
                Some(b'i') => {
                    self.pos += 1;
                    coeff = &coeff * &ExactScalar::i();
                }
                Some(b'x') | Some(b'T') | Some(b'U') => {
                    let var = self.parse_variable()?;
                    let k = if self.eat(b'^') {
                        self.parse_uint()? as u32
                    } else {
                        1
                    };
                    exp[var] += k;
                }
                _ if !any => return Err(self.err("expected a term")),
                _ => break,
            }
            any = true;
            if !self.eat(b'*') {
                // Juxtaposition like `2x1` is also accepted; the loop simply
                // continues if the next token starts a factor.
                match self.peek() {
                    Some(b'x') | Some(b'T') | Some(b'U') | Some(b'(') | Some(b'i') => {}
                    _ => break,
                }
            }
        }
        Ok((coeff, exp))
    }

    /// `a`, `a+bi`, `a-bi`, `bi` inside parentheses.
    fn parse_gaussian(&mut self) -> Result<ExactScalar, SeriesError> {
        let mut neg = false;
        if self.eat(b'-') {
            neg = true;
        } else {
            self.eat(b'+');
        }
        let first = self.parse_number()?;
        let first = if neg { -first } else { first };
        if self.eat(b'i') {
            // pure imaginary, possibly followed by +a? Keep it simple: (bi) only.
            return Ok(ExactScalar::new(BigRational::zero(), first));
        }
        let re = first;
        match self.peek() {
            Some(b'+') | Some(b'-') => {
                let neg_im = self.bump() == Some(b'-');
                let im = if self.peek() == Some(b'i') {
                    BigRational::one()
                } else {
                    self.parse_number()?
                };
                if !self.eat(b'i') {
                    return Err(self.err("expected `i` in complex literal"));
                }
                let im = if neg_im { -im } else { im };
                Ok(ExactScalar::new(re, im))
            }
            _ => Ok(ExactScalar::new(re, BigRational::zero())),
        }
    }

    fn parse_number(&mut self) -> Result<BigRational, SeriesError> {
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

    fn parse_uint(&mut self) -> Result<u64, SeriesError> {
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

    fn parse_variable(&mut self) -> Result<usize, SeriesError> {
        match self.bump() {
            Some(b'T') => self.check_var(0),
            Some(b'U') => self.check_var(1),
            Some(b'x') => {
                let idx = self.parse_uint()? as usize;
                if idx == 0 {
                    return Err(self.err("variables are numbered from x1"));
                }
                self.check_var(idx - 1)
            }
            _ => Err(self.err("expected a variable")),
        }
    }

    fn check_var(&self, var: usize) -> Result<usize, SeriesError> {
        if var >= self.nvars {
            Err(SeriesError::Parse {
                pos: self.pos,
                msg: format!("variable x{} outside a {}-variable ring", var + 1, self.nvars),
            })
        } else {
            Ok(var)
        }
    }
}
