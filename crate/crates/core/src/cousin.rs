//! The Cousin differential `∂₁^{p,-p}` at a chosen codimension-(p+1) point
//! `w`, defined by extending the denominator sequence with `f_{p+1}`.
//!
//! Given `[ω | f_1..f_p]` with coefficients over one denominator `b`:
//!
//! * no fractions (`direct`): the boundary is `[f_{p+1}·ω | f_1..f_{p+1}]`,
//!   which is zero;
//! * `b ∉ (f_1..f_{p+1})` (`unit_denominator`): `b` is a unit at `w` and the
//!   boundary `[f_{p+1}·ω | …]` is again zero;
//! * `b = Σ a_i f_i + u·f_{p+1}` with `u ≡ c ≠ 0` constant modulo
//!   `(f_1..f_p)` (`rewritten`): `a/b` is replaced by `(a/c)/f_{p+1}` and the
//!   boundary is `[(a/c)·… | f_1..f_{p+1}]`.
//!
//! Any other decomposition is refused with the cofactors attached.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::localcoh::{align_to, class_is_zero, LocalCohClass};
use crate::poly::{ideal_member, Frac, Ideal, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    UnitDenominator,
    Rewritten,
    Direct,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::UnitDenominator => "unit_denominator",
            CaseTag::Rewritten => "rewritten",
            CaseTag::Direct => "direct",
        })
    }
}

#[derive(Clone, Debug)]
pub struct BoundaryResult {
    pub input: LocalCohClass,
    pub extension: Poly,
    pub output: LocalCohClass,
    pub case_tag: CaseTag,
    /// Rendered `b = Σ a_i·f_i + u·f_{p+1}` cofactors, when computed.
    pub decomposition: Vec<String>,
}

/// The single denominator shared by all fraction coefficients, if any.
fn common_denominator(c: &LocalCohClass) -> Result<Option<Poly>> {
    let mut found: Option<Poly> = None;
    for (_, coeff) in c.numerator.terms() {
        if coeff.is_poly() {
            continue;
        }
        match &found {
            None => found = Some(coeff.den().clone()),
            Some(b) if b == coeff.den() => {}
            Some(b) => {
                return Err(Error::unsupported(
                    format!("several denominators ({b} and {}); split the class by linearity first", coeff.den()),
                    Vec::new(),
                ))
            }
        }
    }
    Ok(found)
}

fn render_decomposition(b: &Poly, gens: &[Poly], cofactors: &[Poly]) -> Vec<String> {
    let mut out = vec![format!("b = {b}")];
    let p = gens.len() - 1;
    for (i, (g, a)) in gens.iter().zip(cofactors).enumerate() {
        let name = if i == p { "u".to_string() } else { format!("a{}", i + 1) };
        out.push(format!("{name} = {a}  (times {g})"));
    }
    out
}

/// Replaces the common denominator `b` of `c` by the extension where the
/// decomposition allows it. Returns the equal class at the same point, the
/// case, and the rendered decomposition.
pub fn rewrite_denominator(c: &LocalCohClass, extension: &Poly) -> Result<(LocalCohClass, CaseTag, Vec<String>)> {
    let Some(b) = common_denominator(c)? else {
        return Ok((c.clone(), CaseTag::Direct, Vec::new()));
    };
    let ring = c.ring().clone();
    let base = c.ideal();
    if base.contains(&b)? {
        return Err(Error::LocalizationViolation { denominator: b.to_string(), ideal: base.to_string() });
    }
    let mut gens = c.denominators.clone();
    gens.push(extension.clone());
    let full = Ideal::new(&ring, gens.clone());
    let m = ideal_member(&b, &full)?;
    if !m.member {
        return Ok((c.clone(), CaseTag::UnitDenominator, Vec::new()));
    }
    let decomposition = render_decomposition(&b, &gens, &m.cofactors);
    let u = m.cofactors.last().expect("extension cofactor");
    let reduced = base.normal_form(u)?;
    let Some(unit) = reduced.constant_value().filter(|_| !reduced.is_zero()) else {
        return Err(Error::unsupported(
            format!("cofactor u = {u} of the extension is not a nonzero constant modulo ({base})"),
            decomposition,
        ));
    };
    // x ↦ x·b / (c·f_{p+1})
    let den = extension.scale(&unit);
    let numerator = c.numerator.map(|x| {
        let top = x.mul_poly(&b);
        let top = top.as_poly().expect("coefficients share the denominator b").clone();
        Frac::new(top, den.clone()).expect("nonzero extension")
    });
    let rewritten = LocalCohClass { numerator, ..c.clone() };
    Ok((rewritten, CaseTag::Rewritten, decomposition))
}

/// `∂₁^{p,-p}(c)` at the point `w` cut out by `c.denominators ++ [extension]`.
pub fn boundary(c: &LocalCohClass, extension: &Poly, w: &str) -> Result<BoundaryResult> {
    let (rewritten, case_tag, decomposition) = rewrite_denominator(c, extension)?;
    let mut denominators = c.denominators.clone();
    denominators.push(extension.clone());
    let numerator = rewritten.numerator.map(|x| x.mul_poly(extension));
    let output = LocalCohClass::new(w, denominators, numerator)?;
    Ok(BoundaryResult { input: c.clone(), extension: extension.clone(), output, case_tag, decomposition })
}

#[derive(Clone, Debug)]
pub struct SumBoundary {
    pub parts: Vec<BoundaryResult>,
    /// Each part's output rewritten over the first part's denominators.
    pub aligned: Vec<LocalCohClass>,
    pub total: LocalCohClass,
}

impl SumBoundary {
    pub fn is_zero(&self) -> Result<bool> {
        class_is_zero(&self.total)
    }
}

/// Boundaries of `Σ c_i`, each extended by its own `f_{p+1}`, collected over
/// the first summand's denominator order.
pub fn boundary_of_sum(summands: &[(LocalCohClass, Poly)], w: &str) -> Result<SumBoundary> {
    if summands.is_empty() {
        return Err(Error::EmptySequence);
    }
    let parts = summands.iter().map(|(c, ext)| boundary(c, ext, w)).collect::<Result<Vec<_>>>()?;
    let reference = parts[0].output.denominators.clone();
    let mut aligned = Vec::with_capacity(parts.len());
    for part in &parts {
        let a = align_to(&part.output, &reference).map_err(|_| {
            let dens: Vec<String> = part.output.denominators.iter().map(|f| f.to_string()).collect();
            let want: Vec<String> = reference.iter().map(|f| f.to_string()).collect();
            Error::DifferentPoints(format!("({}) vs ({})", dens.join(", "), want.join(", ")))
        })?;
        aligned.push(a);
    }
    let mut total = aligned[0].clone();
    for a in &aligned[1..] {
        total = total.add(a)?;
    }
    Ok(SumBoundary { parts, aligned, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::DiffForm;
    use crate::localcoh::class_equal;
    use crate::parse::parse_poly;
    use crate::poly::PolyRing;
    use proptest::prelude::*;

    fn ring() -> PolyRing {
        PolyRing::new(&["x1", "x2", "x3"])
    }

    fn p(s: &str) -> Poly {
        parse_poly(s, &ring()).unwrap()
    }

    fn fr(n: &str, d: &str) -> Frac {
        Frac::new(p(n), p(d)).unwrap()
    }

    fn at_y(c: Frac, slot: usize) -> LocalCohClass {
        LocalCohClass::new("y", vec![p("x1"), p("x2")], DiffForm::monomial(c, &[slot])).unwrap()
    }

    #[test]
    fn example_is_not_zero() {
        let b = boundary(&at_y(fr("1", "x3"), 1), &p("x3"), "w").unwrap();
        assert_eq!(b.case_tag, CaseTag::Rewritten);
        assert_eq!(b.output.numerator, DiffForm::monomial(Frac::from_poly(p("1")), &[1]));
        assert_eq!(b.output.denominators, vec![p("x1"), p("x2"), p("x3")]);
        assert!(!class_is_zero(&b.output).unwrap());
    }

    #[test]
    fn unit_denominator_vanishes() {
        let b = boundary(&at_y(fr("1", "1 + x1"), 1), &p("x3"), "w").unwrap();
        assert_eq!(b.case_tag, CaseTag::UnitDenominator);
        assert!(class_is_zero(&b.output).unwrap());
    }

    #[test]
    fn polynomial_input_vanishes() {
        let b = boundary(&at_y(Frac::from_poly(p("x2 + 5")), 1), &p("x3"), "w").unwrap();
        assert_eq!(b.case_tag, CaseTag::Direct);
        assert!(class_is_zero(&b.output).unwrap());
    }

    #[test]
    fn shifted_denominator_rewrites() {
        // b = f1 + f3: a1 = 1, u = 1
        let c = at_y(fr("x2", "x1 + x3"), 1);
        let (r, tag, dec) = rewrite_denominator(&c, &p("x3")).unwrap();
        assert_eq!(tag, CaseTag::Rewritten);
        assert_eq!(r.numerator, DiffForm::monomial(fr("x2", "x3"), &[1]));
        assert!(!dec.is_empty());
        let out = boundary(&c, &p("x3"), "w").unwrap().output;
        assert_eq!(out.numerator, DiffForm::monomial(Frac::from_poly(p("x2")), &[1]));
    }

    #[test]
    fn constant_multiple_of_extension() {
        let out = boundary(&at_y(fr("1", "2*x3"), 1), &p("x3"), "w").unwrap().output;
        assert_eq!(out.numerator, DiffForm::monomial(Frac::from_poly(p("1/2")), &[1]));
    }

    #[test]
    fn refusals() {
        let violation = boundary(&at_y(fr("1", "x1"), 1), &p("x3"), "w");
        assert!(matches!(violation, Err(Error::LocalizationViolation { .. })));
        // b = x3^2: u = x3 is not a unit
        match boundary(&at_y(fr("1", "x3^2"), 1), &p("x3"), "w") {
            Err(Error::Unsupported { decomposition, .. }) => assert!(decomposition.iter().any(|s| s.starts_with("u = x3"))),
            other => panic!("{other:?}"),
        }
        let two = at_y(fr("1", "x3"), 1).add(&at_y(fr("1", "x3 + 1"), 0).neg()).unwrap_or_else(|_| unreachable!());
        let mixed = LocalCohClass { numerator: two.numerator, ..at_y(fr("1", "x3"), 1) };
        assert!(matches!(boundary(&mixed, &p("x3"), "w"), Err(Error::Unsupported { .. })));
    }

    #[test]
    fn rewriting_keeps_the_class_after_clearing() {
        // (x2/(x1 + x3) - x2/x3)·(x1 + x3)·x3 = -x1·x2 ∈ (x1, x2)
        let c = at_y(fr("x2", "x1 + x3"), 1);
        let (r, _, _) = rewrite_denominator(&c, &p("x3")).unwrap();
        let diff = c.numerator.sub(&r.numerator).map(|x| x.mul_poly(&p("(x1 + x3)*x3")));
        let cleared = LocalCohClass::new("y", c.denominators.clone(), diff).unwrap();
        assert!(class_is_zero(&cleared).unwrap());
    }

    #[test]
    fn sums() {
        let y = at_y(fr("1", "x3"), 1);
        let single = boundary_of_sum(&[(y.clone(), p("x3"))], "w").unwrap();
        assert!(class_equal(&single.total, &boundary(&y, &p("x3"), "w").unwrap().output).unwrap());
        let cancel = boundary_of_sum(&[(y.clone(), p("x3")), (y.neg(), p("x3"))], "w").unwrap();
        assert!(cancel.is_zero().unwrap());
        // corrector pair: [(1/x1)·dx2 | x3, x2] extended by x1
        let z = LocalCohClass::new("z", vec![p("x3"), p("x2")], DiffForm::monomial(fr("1", "x1"), &[1])).unwrap();
        let pair = boundary_of_sum(&[(y.clone(), p("x3")), (z, p("x1"))], "w").unwrap();
        assert_eq!(pair.aligned[1].numerator, pair.aligned[0].numerator.neg());
        assert!(pair.is_zero().unwrap());
        let elsewhere = boundary_of_sum(&[(y.clone(), p("x3")), (y, p("x3 + 1"))], "w");
        assert!(matches!(elsewhere, Err(Error::DifferentPoints(_))));
    }

    fn small() -> impl Strategy<Value = Poly> {
        prop::collection::vec((0u32..3, 0u32..3, 0u32..2, -3i64..=3), 0..4).prop_map(|ts| {
            Poly::from_terms(
                &ring(),
                ts.into_iter().map(|(a, b, c, k)| (crate::poly::Monomial::from_exponents(vec![a, b, c]), crate::poly::int(k))),
            )
        })
    }

    proptest! {
        #[test]
        fn additive(a in small(), b in small()) {
            let ca = at_y(Frac::new(a, p("x3")).unwrap(), 1);
            let cb = at_y(Frac::new(b, p("x3")).unwrap(), 1);
            let sum = ca.add(&cb).unwrap();
            let ext = p("x3");
            let lhs = boundary(&sum, &ext, "w").unwrap().output;
            let rhs = boundary(&ca, &ext, "w").unwrap().output.add(&boundary(&cb, &ext, "w").unwrap().output).unwrap();
            prop_assert_eq!(lhs.numerator, rhs.numerator);
        }

        #[test]
        fn well_defined(a in small(), r1 in small(), r2 in small()) {
            let ext = p("x3");
            let c = at_y(Frac::new(a.clone(), p("x3")).unwrap(), 1);
            let shift = &(&r1 * &p("x1")) + &(&r2 * &p("x2"));
            let shifted = at_y(Frac::new(&a + &shift, p("x3")).unwrap(), 1);
            let d = boundary(&c, &ext, "w").unwrap().output;
            let e = boundary(&shifted, &ext, "w").unwrap().output;
            prop_assert!(class_equal(&d, &e).unwrap());
        }
    }
}
