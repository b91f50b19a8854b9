//! Recursive-descent parser for polynomial text.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*        division by constants only
//! factor := atom ('^' uint)?
//! atom   := number | 'i' | variable | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};

use super::{GaussianRational, PhasePoly, PhaseVar, SymError};

pub(super) fn parse(src: &str) -> Result<PhasePoly, SymError> {
    let mut p = Parser { src, pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> SymError {
        SymError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<PhasePoly, SymError> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<PhasePoly, SymError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if self.eat('/') {
                let at = self.pos;
                let d = self.factor()?;
                let inv = d
                    .as_constant()
                    .and_then(|c| c.recip())
                    .ok_or(SymError::Parse {
                        pos: at,
                        msg: "divisor must be a nonzero constant".into(),
                    })?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<PhasePoly, SymError> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let start = self.pos;
            while matches!(self.peek_raw(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            let e: u32 = self.src[start..self.pos]
                .parse()
                .map_err(|_| self.err("exponent must be a non-negative integer"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<PhasePoly, SymError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek_raw(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let word = &self.src[start..self.pos];
                if word == "i" {
                    return Ok(PhasePoly::i());
                }
                PhaseVar::from_name(word)
                    .map(PhasePoly::var)
                    .ok_or(SymError::Parse {
                        pos: start,
                        msg: format!("unknown variable '{word}'"),
                    })
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    /// Decimal literal, converted exactly (`0.1` is 1/10).
    fn number(&mut self) -> Result<PhasePoly, SymError> {
        let start = self.pos;
        let mut digits = String::new();
        let mut frac_len = 0u32;
        let mut seen_dot = false;
        while let Some(c) = self.peek_raw() {
            if c.is_ascii_digit() {
                digits.push(c);
                if seen_dot {
                    frac_len += 1;
                }
            } else if c == '.' && !seen_dot {
                seen_dot = true;
            } else {
                break;
            }
            self.pos += 1;
        }
        if digits.is_empty() {
            return Err(SymError::Parse {
                pos: start,
                msg: "malformed number".into(),
            });
        }
        let numer: BigInt = digits.parse().expect("ascii digits");
        let denom = BigInt::from(10).pow(frac_len);
        let r = BigRational::new(numer, denom);
        if r.is_zero() {
            return Ok(PhasePoly::zero());
        }
        Ok(PhasePoly::constant(GaussianRational::real(r)))
    }
}
