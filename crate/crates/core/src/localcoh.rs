//! Generalized fractions `[ω | f_1, …, f_k]` representing classes in
//! `H^k_y(Ω^q)`.
//!
//! Vanishing is decided at the Ext level: the class is zero when every
//! coefficient of `ω` lies in `(f_1, …, f_k)`. Fraction coefficients `a/b` are
//! accepted when `b ∉ (f_1, …, f_k)`: such `b` are units of the local ring at
//! the point, so `a/b ∈ I` exactly when `a ∈ I` (for prime or primary `I`).

use std::fmt;

use crate::error::{Error, Result};
use crate::forms::DiffForm;
use crate::koszul::{permute_comparison, Comparison};
use crate::poly::{Frac, Ideal, Poly, PolyRing, Rational};

#[derive(Clone, Debug)]
pub struct LocalCohClass {
    pub point: String,
    pub denominators: Vec<Poly>,
    pub numerator: DiffForm<Frac>,
    /// Frac denominators must avoid this ideal.
    pub localized_at: Option<Ideal>,
}

/// Outcome of a vanishing test, with the level at which it was decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub zero: bool,
    /// Exponent of the denominators used in the test.
    pub power: u32,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            write!(f, "zero")
        } else {
            write!(f, "nonzero at exponent {} (Ext-level)", self.power)
        }
    }
}

impl LocalCohClass {
    pub fn new(point: impl Into<String>, denominators: Vec<Poly>, numerator: DiffForm<Frac>) -> Result<Self> {
        let first = denominators.first().ok_or(Error::EmptySequence)?;
        if first.ring() != numerator.ring() || denominators.iter().any(|f| f.ring() != first.ring()) {
            return Err(Error::VariableMismatch {
                left: first.ring().names().join(","),
                right: numerator.ring().names().join(","),
            });
        }
        Ok(LocalCohClass { point: point.into(), denominators, numerator, localized_at: None })
    }

    pub fn from_poly_form(point: impl Into<String>, denominators: Vec<Poly>, numerator: &DiffForm<Poly>) -> Result<Self> {
        Self::new(point, denominators, numerator.map(|c| Frac::from_poly(c.clone())))
    }

    pub fn zero(point: impl Into<String>, denominators: Vec<Poly>, degree: usize) -> Result<Self> {
        let ring = denominators.first().ok_or(Error::EmptySequence)?.ring().clone();
        Self::new(point, denominators, DiffForm::zero(&ring, degree))
    }

    /// Requires every Frac denominator to avoid `ideal`.
    pub fn localized(mut self, ideal: Ideal) -> Result<Self> {
        for (_, c) in self.numerator.terms() {
            if !c.is_poly() && ideal.contains(c.den())? {
                return Err(Error::LocalizationViolation { denominator: c.den().to_string(), ideal: ideal.to_string() });
            }
        }
        self.localized_at = Some(ideal);
        Ok(self)
    }

    pub fn ring(&self) -> &PolyRing {
        self.denominators[0].ring()
    }

    pub fn ideal(&self) -> Ideal {
        Ideal::new(self.ring(), self.denominators.clone())
    }

    fn same_support(&self, other: &Self) -> Result<()> {
        if self.point != other.point || self.denominators != other.denominators {
            return Err(Error::MismatchedSupport(format!("{} vs {}", self.support(), other.support())));
        }
        Ok(())
    }

    fn support(&self) -> String {
        let dens: Vec<String> = self.denominators.iter().map(|f| f.to_string()).collect();
        format!("({}) @ {}", dens.join(", "), self.point)
    }

    pub fn neg(&self) -> Self {
        LocalCohClass { numerator: self.numerator.neg(), ..self.clone() }
    }

    /// Numerator sum over identical support.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_support(other)?;
        Ok(LocalCohClass { numerator: self.numerator.add(&other.numerator), ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        LocalCohClass { numerator: self.numerator.scale(r), ..self.clone() }
    }
}

/// Numerator of `[ (∏f)^(k-1)·ω | f_1^k, …, f_p^k ]` coefficientwise, checked
/// against `(f_1^k, …, f_p^k)`.
fn vanishes(c: &LocalCohClass, power: u32) -> Result<bool> {
    let power = power.max(1);
    let ring = c.ring().clone();
    let ideal = Ideal::new(&ring, c.denominators.iter().map(|f| f.pow(power)).collect());
    let multiplier = c.denominators.iter().fold(Poly::one(&ring), |acc, f| &acc * f).pow(power - 1);
    let base = c.ideal();
    for (_, coeff) in c.numerator.terms() {
        if !coeff.is_poly() && base.contains(coeff.den())? {
            return Err(Error::FracCoefficient { coefficient: coeff.to_string(), ideal: base.to_string() });
        }
        let scaled = coeff.num() * &multiplier;
        if !ideal.contains(&scaled)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn class_is_zero(c: &LocalCohClass) -> Result<bool> {
    vanishes(c, 1)
}

/// Vanishing test with the denominators raised to `power` (the colimit check).
pub fn class_is_zero_at_power(c: &LocalCohClass, power: u32) -> Result<bool> {
    vanishes(c, power)
}

pub fn verdict(c: &LocalCohClass, power: u32) -> Result<Verdict> {
    Ok(Verdict { zero: vanishes(c, power)?, power: power.max(1) })
}

pub fn class_equal(a: &LocalCohClass, b: &LocalCohClass) -> Result<bool> {
    class_is_zero(&a.sub(b)?)
}

/// Reorders the denominators, `new[i] = old[perm[i]]`, multiplying the
/// numerator by the determinant of the degree-1 comparison map.
pub fn permute_denominators(c: &LocalCohClass, perm: &[usize]) -> Result<LocalCohClass> {
    if perm.len() != c.denominators.len() {
        return Err(Error::NotAPermutation(format!("{perm:?} on {} denominators", c.denominators.len())));
    }
    let cmp = Comparison::from_permutation(c.ring(), perm)?;
    Ok(apply(c, &cmp))
}

fn apply(c: &LocalCohClass, cmp: &Comparison) -> LocalCohClass {
    let denominators = cmp.perm.iter().map(|&j| c.denominators[j].clone()).collect();
    let numerator = if cmp.det < 0 { c.numerator.neg() } else { c.numerator.clone() };
    LocalCohClass { denominators, numerator, ..c.clone() }
}

/// Rewrites `c` over `target`, which must be a reordering of its denominators.
pub fn align_to(c: &LocalCohClass, target: &[Poly]) -> Result<LocalCohClass> {
    let cmp = permute_comparison(&c.denominators, target)?;
    Ok(apply(c, &cmp))
}

/// A formal sum of classes at possibly different points. Components sharing a
/// point and denominator sequence are merged.
#[derive(Clone, Debug, Default)]
pub struct FormalSum {
    pub components: Vec<LocalCohClass>,
}

impl FormalSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: LocalCohClass) {
        for existing in &mut self.components {
            if existing.point == c.point && existing.denominators == c.denominators {
                existing.numerator = existing.numerator.add(&c.numerator);
                return;
            }
        }
        self.components.push(c);
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Every component vanishes.
    pub fn is_zero(&self) -> Result<bool> {
        for c in &self.components {
            if !class_is_zero(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl FromIterator<LocalCohClass> for FormalSum {
    fn from_iter<I: IntoIterator<Item = LocalCohClass>>(iter: I) -> Self {
        let mut s = FormalSum::new();
        for c in iter {
            s.push(c);
        }
        s
    }
}

/// Same support: the numerator sum; otherwise a two-component formal sum.
pub fn add_classes(a: &LocalCohClass, b: &LocalCohClass) -> FormalSum {
    [a.clone(), b.clone()].into_iter().collect()
}

impl fmt::Display for LocalCohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dens: Vec<String> = self.denominators.iter().map(|p| p.to_string()).collect();
        write!(f, "[ {} | {} ] @ {}", self.numerator, dens.join(", "), self.point)
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(" + "))
    }
}
