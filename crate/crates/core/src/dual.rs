//! The dual-number extension `R[ε]/(ε²)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing, Rational};

/// `base + ε·eps`. There is no ε² slot: products drop it by construction.
#[derive(Clone, PartialEq)]
pub struct Dual<C> {
    base: C,
    eps: C,
}

pub type DualPoly = Dual<Poly>;

impl<C: Coefficient> Dual<C> {
    pub fn new(base: C, eps: C) -> Self {
        assert_eq!(base.ring(), eps.ring(), "dual components over different rings");
        Dual { base, eps }
    }

    /// Embeds `c` with zero ε-part.
    pub fn constant_part(c: C) -> Self {
        let eps = C::zero(c.ring());
        Dual { base: c, eps }
    }

    pub fn pure_eps(c: C) -> Self {
        let base = C::zero(c.ring());
        Dual { base, eps: c }
    }

    pub fn base(&self) -> &C {
        &self.base
    }

    pub fn eps(&self) -> &C {
        &self.eps
    }

    /// Projection `ε ↦ 0`.
    pub fn set_eps_zero(&self) -> C {
        self.base.clone()
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Dual<D> {
        Dual { base: f(&self.base), eps: f(&self.eps) }
    }

    fn check(&self, rhs: &Self) -> Result<()> {
        if self.base.ring() == rhs.base.ring() {
            Ok(())
        } else {
            Err(Error::VariableMismatch {
                left: self.base.ring().names().join(","),
                right: rhs.base.ring().names().join(","),
            })
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(Dual { base: self.base.add_ref(&rhs.base), eps: self.eps.add_ref(&rhs.eps) })
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(Dual { base: self.base.sub_ref(&rhs.base), eps: self.eps.sub_ref(&rhs.eps) })
    }

    /// `(a + εb)(c + εd) = ac + ε(ad + bc)`
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(Dual {
            base: self.base.mul_ref(&rhs.base),
            eps: self.base.mul_ref(&rhs.eps).add_ref(&self.eps.mul_ref(&rhs.base)),
        })
    }
}

impl<C: Coefficient> Coefficient for Dual<C> {
    const HAS_EPS: bool = true;

    fn zero(ring: &PolyRing) -> Self {
        Dual { base: C::zero(ring), eps: C::zero(ring) }
    }
    fn from_poly(p: Poly) -> Self {
        Dual::constant_part(C::from_poly(p))
    }
    fn ring(&self) -> &PolyRing {
        self.base.ring()
    }
    fn is_zero(&self) -> bool {
        self.base.is_zero() && self.eps.is_zero()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.try_add(rhs).expect("dual arithmetic across different rings")
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.try_sub(rhs).expect("dual arithmetic across different rings")
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("dual arithmetic across different rings")
    }
    fn neg_ref(&self) -> Self {
        Dual { base: self.base.neg_ref(), eps: self.eps.neg_ref() }
    }
    fn scale(&self, c: &Rational) -> Self {
        Dual { base: self.base.scale(c), eps: self.eps.scale(c) }
    }
    fn is_compound(&self) -> bool {
        !self.eps.is_zero() || self.base.is_compound()
    }
}

impl<C: Coefficient> Add for &Dual<C> {
    type Output = Dual<C>;
    fn add(self, rhs: Self) -> Dual<C> {
        self.add_ref(rhs)
    }
}

impl<C: Coefficient> Sub for &Dual<C> {
    type Output = Dual<C>;
    fn sub(self, rhs: Self) -> Dual<C> {
        self.sub_ref(rhs)
    }
}

impl<C: Coefficient> Mul for &Dual<C> {
    type Output = Dual<C>;
    fn mul(self, rhs: Self) -> Dual<C> {
        self.mul_ref(rhs)
    }
}

impl<C: Coefficient> Neg for &Dual<C> {
    type Output = Dual<C>;
    fn neg(self) -> Dual<C> {
        self.neg_ref()
    }
}

impl<C: Coefficient> fmt::Display for Dual<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.base.is_zero(), self.eps.is_zero()) {
            (_, true) => write!(f, "{}", self.base),
            (true, false) => write!(f, "eps*({})", self.eps),
            (false, false) => write!(f, "{} + eps*({})", self.base, self.eps),
        }
    }
}

impl<C: Coefficient> fmt::Debug for Dual<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dual({self})")
    }
}
