//! Polynomial text grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | variable | '(' expr ')'
//! ```
//!
//! Whitespace is insignificant. Error offsets are byte offsets into the input.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing, Rational};

pub fn parse_poly(text: &str, ring: &PolyRing) -> Result<Poly> {
    let mut p = Parser { src: text, pos: 0, ring };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error(format!("unexpected '{}'", p.peek_char().unwrap())));
    }
    Ok(out)
}

/// Parses `P + eps*(Q)` style input into a dual polynomial. Terms with
/// `eps^2` or higher vanish.
pub fn parse_dual(text: &str, ring: &PolyRing) -> Result<Dual<Poly>> {
    if ring.index_of("eps").is_some() {
        return Err(Error::Parse { offset: 0, message: "'eps' is reserved for the dual unit".into() });
    }
    let ext = ring.with_prefix(&["eps"]);
    let whole = parse_poly(text, &ext)?;
    let mut base = Vec::new();
    let mut eps = Vec::new();
    for (m, c) in whole.terms() {
        let rest = crate::poly::Monomial::from_exponents(m.exponents()[1..].to_vec());
        match m.exponents()[0] {
            0 => base.push((rest, c.clone())),
            1 => eps.push((rest, c.clone())),
            _ => {}
        }
    }
    Ok(Dual::new(Poly::from_terms(ring, base), Poly::from_terms(ring, eps)))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    ring: &'a PolyRing,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_char() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_char()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
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

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let at = self.pos;
            let Some(digits) = self.digits() else {
                return Err(self.error("expected a non-negative integer exponent"));
            };
            let e: u32 = digits.parse().map_err(|_| Error::Parse { offset: at, message: "exponent too large".into() })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while matches!(self.peek_char(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.src[start..self.pos].to_string())
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_alphabetic() || c == '_' => self.variable(),
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Poly> {
        let num: BigInt = self.digits().unwrap().parse().unwrap();
        let mut value = Rational::from_integer(num);
        if self.eat('/') {
            self.skip_ws();
            let at = self.pos;
            let Some(den) = self.digits() else {
                return Err(self.error("expected an integer denominator"));
            };
            let den: BigInt = den.parse().unwrap();
            if den.is_zero() {
                return Err(Error::Parse { offset: at, message: "zero denominator".into() });
            }
            value /= Rational::from_integer(den);
        }
        Ok(Poly::constant(self.ring, value))
    }

    fn variable(&mut self) -> Result<Poly> {
        let start = self.pos;
        while matches!(self.peek_char(), Some(c) if c.is_alphanumeric() || c == '_') {
            self.pos += self.peek_char().unwrap().len_utf8();
        }
        let name = &self.src[start..self.pos];
        Poly::var_named(self.ring, name)
            .ok_or(Error::Parse { offset: start, message: format!("unknown variable '{name}'") })
    }
}
