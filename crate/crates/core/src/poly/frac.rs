use std::fmt;

use super::{Poly, PolyRing, Rational};

/// A fraction `num / den` of polynomials.
///
/// Fractions are kept unreduced apart from cheap normalisations: the
/// denominator is made monic, constant denominators are folded into the
/// numerator, and exact divisibility `den | num` collapses to a polynomial.
/// Equality is cross-multiplication.
#[derive(Clone)]
pub struct Frac {
    num: Poly,
    den: Poly,
}

impl Frac {
    pub fn new(num: Poly, den: Poly) -> Option<Frac> {
        if den.is_zero() || num.ring() != den.ring() {
            return None;
        }
        Some(Self::normalized(num, den))
    }

    pub fn from_poly(p: Poly) -> Frac {
        let den = Poly::one(p.ring());
        Frac { num: p, den }
    }

    pub fn zero(ring: &PolyRing) -> Frac {
        Frac::from_poly(Poly::zero(ring))
    }

    fn normalized(num: Poly, den: Poly) -> Frac {
        let ring = num.ring().clone();
        if num.is_zero() {
            return Frac::zero(&ring);
        }
        if let Some(c) = den.constant_value() {
            return Frac::from_poly(num.scale(&c.recip()));
        }
        if let Some(q) = num.div_exact(&den) {
            return Frac::from_poly(q);
        }
        let lc = den.leading_term(super::MonomialOrder::Grevlex).map(|t| t.1.clone()).unwrap();
        let inv = lc.recip();
        Frac { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn ring(&self) -> &PolyRing {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.constant_value().is_some()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_poly().then_some(&self.num)
    }

    pub fn add(&self, rhs: &Frac) -> Frac {
        if self.den == rhs.den {
            return Self::normalized(&self.num + &rhs.num, self.den.clone());
        }
        if let Some(q) = rhs.den.div_exact(&self.den) {
            return Self::normalized(&self.num * &q + &rhs.num, rhs.den.clone());
        }
        if let Some(q) = self.den.div_exact(&rhs.den) {
            return Self::normalized(&self.num + &rhs.num * &q, self.den.clone());
        }
        Self::normalized(&self.num * &rhs.den + &rhs.num * &self.den, &self.den * &rhs.den)
    }

    pub fn neg(&self) -> Frac {
        Frac { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, rhs: &Frac) -> Frac {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Frac) -> Frac {
        if self.is_poly() && rhs.is_poly() {
            return Frac::from_poly(&self.num * &rhs.num);
        }
        Self::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    pub fn mul_poly(&self, p: &Poly) -> Frac {
        Self::normalized(&self.num * p, self.den.clone())
    }

    pub fn scale(&self, c: &Rational) -> Frac {
        Frac { num: self.num.scale(c), den: self.den.clone() }
    }

    /// `d(a/b) = (b·da − a·db) / b²`, returned as numerator forms per variable.
    pub(crate) fn partial(&self, index: usize) -> Frac {
        let top = &self.den * &self.num.derivative(index) - &self.num * &self.den.derivative(index);
        Self::normalized(top, &self.den * &self.den)
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| if p.is_single_term() { p.to_string() } else { format!("({p})") };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Frac({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn ring() -> PolyRing {
        PolyRing::new(&["x1", "x2", "x3"])
    }

    fn p(s: &str) -> Poly {
        parse_poly(s, &ring()).unwrap()
    }

    fn fr(n: &str, d: &str) -> Frac {
        Frac::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(Frac::new(p("1"), p("0")).is_none());
    }

    #[test]
    fn equality_is_cross_multiplication() {
        assert_eq!(fr("x1", "x3"), fr("2*x1*x2", "2*x2*x3"));
        assert_ne!(fr("x1", "x3"), fr("x1", "x2"));
    }

    #[test]
    fn normalisation() {
        assert!(fr("x1*x3", "x3").is_poly());
        assert_eq!(fr("x1", "2").as_poly(), Some(&p("1/2*x1")));
        assert_eq!(fr("1", "2*x3").den(), &p("x3"));
    }

    #[test]
    fn arithmetic() {
        // 1/x3 + 1/x3^2 = (x3 + 1)/x3^2
        assert_eq!(fr("1", "x3").add(&fr("1", "x3^2")), fr("x3 + 1", "x3^2"));
        assert_eq!(fr("1", "x3").sub(&fr("1", "x3")), Frac::zero(&ring()));
        assert_eq!(fr("x1", "x3").mul_poly(&p("x3")), Frac::from_poly(p("x1")));
        // d/dx3 (1/x3) = -1/x3^2
        assert_eq!(fr("1", "x3").partial(2), fr("-1", "x3^2"));
    }

    #[test]
    fn display() {
        assert_eq!(fr("1", "x3").to_string(), "1/x3");
        assert_eq!(fr("x1 + 1", "x3 + 1").to_string(), "(x1 + 1)/(x3 + 1)");
    }
}
