//! Text form of polynomials.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := rational ('*' factor)* | factor ('*' factor)*
//! factor   := var ('^' uint)?
//! rational := int ('/' uint)?
//! ```
//!
//! A single leading `-` is accepted on the first term. Whitespace between
//! tokens is ignored. Printing (via `Display`) lists terms in descending
//! weighted-grevlex order with explicit `*` and never emits a unary `+`.

use std::sync::Arc;

use num::{BigInt, One, Zero};

use super::monomial::Monomial;
use super::polynomial::Polynomial;
use super::vars::VarTable;
use super::Rational;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Arc<VarTable>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn uint(&mut self) -> Result<BigInt> {
        match self.digits() {
            Some(d) => Ok(d.parse::<BigInt>().expect("ascii digits")),
            None => self.err("expected an unsigned integer"),
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn factor(&mut self, exps: &mut [u32]) -> Result<()> {
        let at = self.pos;
        let Some(name) = self.ident() else {
            return self.err("expected a variable");
        };
        let Some(i) = self.vars.index_of(name) else {
            self.pos = at;
            return Err(Error::UnknownVariable(name.to_string()));
        };
        let mut e = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let v = self.uint()?;
            e = match u32::try_from(&v) {
                Ok(e) => e,
                Err(_) => return self.err("exponent too large"),
            };
        }
        exps[i] += e;
        Ok(())
    }

    fn term(&mut self) -> Result<(Monomial, Rational)> {
        let mut exps = vec![0u32; self.vars.len()];
        let mut coef = Rational::one();
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let num = self.uint()?;
            let mut den = BigInt::one();
            if self.peek() == Some(b'/') {
                self.pos += 1;
                den = self.uint()?;
                if den.is_zero() {
                    return self.err("zero denominator");
                }
            }
            coef = Rational::new(num, den);
        } else {
            self.factor(&mut exps)?;
        }
        while self.peek() == Some(b'*') {
            self.pos += 1;
            self.factor(&mut exps)?;
        }
        Ok((Monomial::from_exponents(exps), coef))
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut out = Polynomial::zero(self.vars);
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negate = true;
        }
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, if negate { -c } else { c });
            match self.peek() {
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                None => break,
                Some(_) => return self.err("expected `+`, `-` or end of input"),
            }
            self.pos += 1;
        }
        Ok(out)
    }
}

/// Parse a polynomial over `vars`.
pub fn parse_polynomial(text: &str, vars: &Arc<VarTable>) -> Result<Polynomial> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    p.expr()
}

impl Polynomial {
    pub fn parse(text: &str, vars: &Arc<VarTable>) -> Result<Polynomial> {
        parse_polynomial(text, vars)
    }
}
