//! Coefficient rings for forms and Koszul matrices.

use std::fmt::{Debug, Display};

use crate::forms::DiffForm;
use crate::poly::{Frac, Poly, PolyRing, Rational};

/// A commutative ℚ-algebra built over a [`PolyRing`].
pub trait Coefficient: Clone + PartialEq + Debug + Display + Send + Sync + 'static {
    /// Whether forms over this ring carry the extra `dε` generator.
    const HAS_EPS: bool = false;

    fn zero(ring: &PolyRing) -> Self;
    fn from_poly(p: Poly) -> Self;
    fn ring(&self) -> &PolyRing;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale(&self, c: &Rational) -> Self;

    fn one(ring: &PolyRing) -> Self {
        Self::from_poly(Poly::one(ring))
    }

    /// True when the rendering needs parentheses inside a product.
    fn is_compound(&self) -> bool;
}

/// Coefficients with a universal derivation `d` into 1-forms.
pub trait Differentiable: Coefficient {
    fn differential(&self) -> DiffForm<Self>;
}

impl Coefficient for Poly {
    fn zero(ring: &PolyRing) -> Self {
        Poly::zero(ring)
    }
    fn from_poly(p: Poly) -> Self {
        p
    }
    fn ring(&self) -> &PolyRing {
        Poly::ring(self)
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Rational) -> Self {
        Poly::scale(self, c)
    }
    fn is_compound(&self) -> bool {
        self.num_terms() > 1
    }
}

impl Coefficient for Frac {
    fn zero(ring: &PolyRing) -> Self {
        Frac::zero(ring)
    }
    fn from_poly(p: Poly) -> Self {
        Frac::from_poly(p)
    }
    fn ring(&self) -> &PolyRing {
        Frac::ring(self)
    }
    fn is_zero(&self) -> bool {
        Frac::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn scale(&self, c: &Rational) -> Self {
        Frac::scale(self, c)
    }
    fn is_compound(&self) -> bool {
        !self.is_poly() || self.num().num_terms() > 1
    }
}
