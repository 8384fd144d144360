//! Text form of polynomials.
//!
//! ```text
//! poly   := ["+"|"-"] term (("+"|"-") term)*
//! term   := factor ("*"? factor)*
//! factor := integer ["/" integer] | var ["^" integer]
//! ```
//!
//! Whitespace is ignored. A numeric factor may be followed directly by a
//! variable (`3x1`), so the `*` between coefficient and variable is optional.

use std::sync::Arc;

use num_bigint::BigInt;

use super::{Coefficient, Monomial, MonomialOrder, PolyError, Polynomial, Ring};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<Ring>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn exponent(&mut self) -> Result<u32, PolyError> {
        let at = self.pos;
        let v = self.integer()?;
        u32::try_from(&v).map_err(|_| PolyError::Syntax {
            pos: at,
            msg: format!("exponent {v} too large"),
        })
    }

    fn identifier(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        let first = *self.src.get(self.pos)?;
        if !(first.is_ascii_alphabetic() || first == b'_') {
            return None;
        }
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        Some(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier"))
    }

    /// Parses one factor into the running coefficient and monomial.
    fn factor(&mut self, coeff: &mut Coefficient, mono: &mut Monomial) -> Result<(), PolyError> {
        let field = self.ring.field();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let num = self.integer()?;
                let den = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.integer()?
                } else {
                    BigInt::from(1)
                };
                let c = field.from_fraction(&num, &den).map_err(|e| match e {
                    PolyError::NotInField(msg) => PolyError::NotInField(format!("{msg} at {start}")),
                    other => other,
                })?;
                *coeff = &*coeff * &c;
                Ok(())
            }
            Some(_) => {
                let start = self.pos;
                let Some(name) = self.identifier() else {
                    return Err(self.err("expected coefficient or variable"));
                };
                let idx = self.ring.var_index(name).ok_or_else(|| PolyError::UnknownVariable {
                    name: name.to_string(),
                    pos: start,
                })?;
                let exp = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.exponent()?
                } else {
                    1
                };
                *mono = mono.mul(&Monomial::var(self.ring.nvars(), idx, exp));
                Ok(())
            }
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn term(&mut self) -> Result<(Monomial, Coefficient), PolyError> {
        let mut coeff = self.ring.field().one();
        let mut mono = Monomial::one(self.ring.nvars());
        self.factor(&mut coeff, &mut mono)?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    self.factor(&mut coeff, &mut mono)?;
                }
                // implicit product such as `3x1` or `2 x1`
                Some(c) if c.is_ascii_alphanumeric() || c == b'_' => {
                    self.factor(&mut coeff, &mut mono)?;
                }
                _ => return Ok((mono, coeff)),
            }
        }
    }

    fn polynomial(&mut self) -> Result<Polynomial, PolyError> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let (m, c) = self.term()?;
            terms.push((m, if sign < 0 { -&c } else { c }));
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                None => break,
                Some(_) => return Err(self.err("expected '+', '-' or '*'")),
            }
            self.pos += 1;
        }
        Ok(Polynomial::from_terms(self.ring, MonomialOrder::Grevlex, terms))
    }
}

/// Parses `text` over `ring`; the result is in canonical grevlex form.
pub fn parse_polynomial(text: &str, ring: &Arc<Ring>) -> Result<Polynomial, PolyError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring,
    };
    p.polynomial()
}
