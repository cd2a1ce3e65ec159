//! Buchberger's algorithm with representation tracking.
//!
//! Every basis element remembers how it is built from the original
//! generators, so membership queries can return cofactors against the
//! generators the caller supplied rather than against the basis.

use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::One;

use super::{Monomial, MonomialOrder, Poly, PolyRing, Rational};
use crate::error::{Error, Result};

pub const DEFAULT_GB_LIMIT: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroebnerConfig {
    /// Abort once the working basis grows past this many elements.
    pub max_basis: usize,
    pub order: MonomialOrder,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig { max_basis: DEFAULT_GB_LIMIT, order: MonomialOrder::Grevlex }
    }
}

impl GroebnerConfig {
    /// Default configuration with the basis cap taken from `KOSZUL_GB_LIMIT` when set.
    pub fn from_env() -> Self {
        let max_basis = std::env::var("KOSZUL_GB_LIMIT")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_GB_LIMIT);
        GroebnerConfig { max_basis, ..Default::default() }
    }

    pub fn with_order(self, order: MonomialOrder) -> Self {
        GroebnerConfig { order, ..self }
    }
}

/// Multivariate division of `f` by `divisors`.
///
/// Returns quotients (one per divisor) and the remainder with
/// `f = Σ q_i·divisors[i] + r`. When several divisors apply, the first one in
/// list order is used.
pub fn divide(f: &Poly, divisors: &[Poly], order: MonomialOrder) -> (Vec<Poly>, Poly) {
    let ring = f.ring();
    let leads: Vec<Option<(Monomial, Rational)>> =
        divisors.iter().map(|g| g.leading_term(order).map(|(m, c)| (m.clone(), c.clone()))).collect();
    let mut quotients = vec![Poly::zero(ring); divisors.len()];
    let mut rem = Poly::zero(ring);
    let mut p = f.clone();
    while let Some((m, c)) = p.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        let hit = leads.iter().enumerate().find_map(|(i, lt)| {
            let (lm, lc) = lt.as_ref()?;
            lm.quotient_of(&m).map(|t| (i, t, &c / lc))
        });
        match hit {
            Some((i, t, k)) => {
                quotients[i].add_term(t.clone(), k.clone());
                p = &p - &divisors[i].mul_term(&t, &k);
            }
            None => {
                p.add_term(m.clone(), -c.clone());
                rem.add_term(m, c);
            }
        }
    }
    (quotients, rem)
}

#[derive(Clone)]
struct Tracked {
    poly: Poly,
    /// `poly = Σ rep[i]·generators[i]`
    rep: Vec<Poly>,
}

impl Tracked {
    fn scale(&self, c: &Rational) -> Tracked {
        Tracked { poly: self.poly.scale(c), rep: self.rep.iter().map(|r| r.scale(c)).collect() }
    }

    fn monic(&self, order: MonomialOrder) -> Tracked {
        match self.poly.leading_term(order) {
            Some((_, c)) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }
}

fn sub_combination(rep: &mut [Poly], quotients: &[Poly], basis: &[Tracked]) {
    for (q, b) in quotients.iter().zip(basis) {
        if q.is_zero() {
            continue;
        }
        for (slot, r) in rep.iter_mut().zip(&b.rep) {
            if !r.is_zero() {
                *slot = &*slot - &(q * r);
            }
        }
    }
}

fn reduce_tracked(t: &Tracked, basis: &[Tracked], order: MonomialOrder) -> Tracked {
    let divisors: Vec<Poly> = basis.iter().map(|b| b.poly.clone()).collect();
    let (q, r) = divide(&t.poly, &divisors, order);
    let mut rep = t.rep.clone();
    sub_combination(&mut rep, &q, basis);
    Tracked { poly: r, rep }
}

fn s_polynomial(a: &Tracked, b: &Tracked, order: MonomialOrder) -> Tracked {
    let (ma, ca) = a.poly.leading_term(order).unwrap();
    let (mb, cb) = b.poly.leading_term(order).unwrap();
    let l = ma.lcm(mb);
    let ta = ma.quotient_of(&l).unwrap();
    let tb = mb.quotient_of(&l).unwrap();
    let ka = ca.recip();
    let kb = cb.recip();
    let poly = &a.poly.mul_term(&ta, &ka) - &b.poly.mul_term(&tb, &kb);
    let rep = a.rep.iter().zip(&b.rep).map(|(ra, rb)| &ra.mul_term(&ta, &ka) - &rb.mul_term(&tb, &kb)).collect();
    Tracked { poly, rep }
}

/// Reduced Gröbner basis together with the representation of each element.
#[derive(Clone)]
pub(crate) struct TrackedBasis {
    elements: Vec<Tracked>,
    order: MonomialOrder,
}

impl TrackedBasis {
    pub(crate) fn polys(&self) -> Vec<Poly> {
        self.elements.iter().map(|t| t.poly.clone()).collect()
    }

    fn is_unit(&self) -> bool {
        self.elements.iter().any(|t| t.poly.is_constant() && !t.poly.is_zero())
    }
}

fn buchberger(ring: &PolyRing, gens: &[Poly], cfg: GroebnerConfig) -> Result<TrackedBasis> {
    let order = cfg.order;
    let n = gens.len();
    let unit_rep = |i: usize| -> Vec<Poly> {
        (0..n).map(|j| if i == j { Poly::one(ring) } else { Poly::zero(ring) }).collect()
    };

    let mut basis: Vec<Tracked> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let t = Tracked { poly: g.clone(), rep: unit_rep(i) }.monic(order);
        if t.poly.is_constant() {
            return Ok(TrackedBasis { elements: vec![t], order });
        }
        basis.push(t);
    }

    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }

    loop {
        // normal selection strategy: smallest lcm first, ties broken by index
        let next = pending
            .iter()
            .copied()
            .min_by(|&(a, b), &(c, d)| {
                let l1 = lcm_of(&basis[a].poly, &basis[b].poly, order);
                let l2 = lcm_of(&basis[c].poly, &basis[d].poly, order);
                order.cmp(&l1, &l2).then((a, b).cmp(&(c, d)))
            });
        let Some((i, j)) = next else { break };
        pending.remove(&(i, j));

        let li = basis[i].poly.leading_monomial(order).unwrap().clone();
        let lj = basis[j].poly.leading_monomial(order).unwrap().clone();
        if li.is_coprime(&lj) {
            continue;
        }
        let l = li.lcm(&lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].poly.leading_monomial(order).unwrap().divides(&l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }

        let s = s_polynomial(&basis[i], &basis[j], order);
        let r = reduce_tracked(&s, &basis, order);
        if r.poly.is_zero() {
            continue;
        }
        let r = r.monic(order);
        if r.poly.is_constant() {
            return Ok(TrackedBasis { elements: vec![r], order });
        }
        let new = basis.len();
        basis.push(r);
        if basis.len() > cfg.max_basis {
            return Err(Error::BasisLimit { limit: cfg.max_basis });
        }
        for k in 0..new {
            pending.insert((k, new));
        }
    }

    Ok(TrackedBasis { elements: interreduce(basis, order), order })
}

fn lcm_of(a: &Poly, b: &Poly, order: MonomialOrder) -> Monomial {
    a.leading_monomial(order).unwrap().lcm(b.leading_monomial(order).unwrap())
}

fn interreduce(mut basis: Vec<Tracked>, order: MonomialOrder) -> Vec<Tracked> {
    basis.sort_by(|a, b| order.cmp(a.poly.leading_monomial(order).unwrap(), b.poly.leading_monomial(order).unwrap()));
    // minimal basis: drop elements whose leading monomial is a multiple of an earlier one
    let mut minimal: Vec<Tracked> = Vec::new();
    for t in basis {
        let lm = t.poly.leading_monomial(order).unwrap();
        if minimal.iter().any(|m| m.poly.leading_monomial(order).unwrap().divides(lm)) {
            continue;
        }
        minimal.push(t);
    }
    for i in 0..minimal.len() {
        let others: Vec<Tracked> =
            minimal.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, t)| t.clone()).collect();
        let reduced = reduce_tracked(&minimal[i], &others, order);
        // the leading term survives because the basis is minimal, so no quotient
        // lands on the element itself; fold the tracking back in
        minimal[i] = reduced.monic(order);
    }
    minimal
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn groebner_basis(ring: &PolyRing, gens: &[Poly], cfg: GroebnerConfig) -> Result<Vec<Poly>> {
    Ok(buchberger(ring, gens, cfg)?.polys())
}

/// An ideal given by generators, with a lazily computed reduced Gröbner basis.
#[derive(Clone)]
pub struct Ideal {
    ring: PolyRing,
    generators: Vec<Poly>,
    config: GroebnerConfig,
    cache: OnceLock<Result<Arc<TrackedBasis>>>,
}

impl Ideal {
    pub fn new(ring: &PolyRing, generators: Vec<Poly>) -> Self {
        Self::with_config(ring, generators, GroebnerConfig::from_env())
    }

    pub fn with_config(ring: &PolyRing, generators: Vec<Poly>, config: GroebnerConfig) -> Self {
        for g in &generators {
            assert_eq!(g.ring(), ring, "ideal generator over a different ring");
        }
        Ideal { ring: ring.clone(), generators, config, cache: OnceLock::new() }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn config(&self) -> GroebnerConfig {
        self.config
    }

    fn tracked(&self) -> Result<Arc<TrackedBasis>> {
        self.cache
            .get_or_init(|| buchberger(&self.ring, &self.generators, self.config).map(Arc::new))
            .clone()
    }

    pub fn groebner(&self) -> Result<Vec<Poly>> {
        Ok(self.tracked()?.polys())
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.tracked()?.is_unit())
    }

    pub fn normal_form(&self, f: &Poly) -> Result<Poly> {
        let gb = self.tracked()?;
        Ok(divide(f, &gb.polys(), gb.order).1)
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Every generator of `other` lies in `self`.
    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in other.generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", gens.join(", "))
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal({self})")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// One cofactor per original generator: `f = Σ cofactors[i]·gens[i] + remainder`.
    pub cofactors: Vec<Poly>,
    pub remainder: Poly,
}

pub fn ideal_member(f: &Poly, ideal: &Ideal) -> Result<Membership> {
    let gb = ideal.tracked()?;
    let (q, remainder) = divide(f, &gb.polys(), gb.order);
    let mut cofactors = vec![Poly::zero(ideal.ring()); ideal.generators().len()];
    for (qj, t) in q.iter().zip(&gb.elements) {
        if qj.is_zero() {
            continue;
        }
        for (c, r) in cofactors.iter_mut().zip(&t.rep) {
            if !r.is_zero() {
                *c = &*c + &(qj * r);
            }
        }
    }
    Ok(Membership { member: remainder.is_zero(), cofactors, remainder })
}

/// `f` is congruent to a nonzero constant modulo a proper ideal.
pub fn is_unit_mod(f: &Poly, ideal: &Ideal) -> Result<bool> {
    if ideal.is_unit()? {
        return Err(Error::UnitIdeal);
    }
    let nf = ideal.normal_form(f)?;
    Ok(!nf.is_zero() && nf.is_constant())
}

/// `(ideal : f)`, computed as `(ideal ∩ (f)) / f` by eliminating an auxiliary variable.
pub fn ideal_quotient(ideal: &Ideal, f: &Poly) -> Result<Ideal> {
    let ring = ideal.ring();
    if f.is_zero() {
        return Ok(Ideal::with_config(ring, vec![Poly::one(ring)], ideal.config()));
    }
    if ideal.generators().iter().all(Poly::is_zero) {
        return Ok(Ideal::with_config(ring, vec![], ideal.config()));
    }
    let ext = ring.with_prefix(&["_t"]);
    let t = Poly::var(&ext, 0);
    let one_minus_t = &Poly::one(&ext) - &t;
    let mut gens: Vec<Poly> = ideal.generators().iter().map(|g| &t * &g.lift_into(&ext, 1)).collect();
    gens.push(&one_minus_t * &f.lift_into(&ext, 1));
    let cfg = ideal.config().with_order(MonomialOrder::Elimination { block: 1 });
    let gb = buchberger(&ext, &gens, cfg)?;
    let mut quotient = Vec::new();
    for g in gb.polys() {
        if let Some(h) = g.project_from(ring, 1) {
            let q = h.div_exact(f).expect("elements of I ∩ (f) are multiples of f");
            quotient.push(q);
        }
    }
    Ok(Ideal::with_config(ring, quotient, ideal.config()))
}

/// Outcome of a regular-sequence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regularity {
    pub ok: bool,
    /// False when the Gröbner size cap stopped the check before a verdict.
    pub verified: bool,
    /// 1-based index of the first failing element.
    pub failing_stage: Option<usize>,
    pub detail: String,
}

impl Regularity {
    fn pass(detail: String) -> Self {
        Regularity { ok: true, verified: true, failing_stage: None, detail }
    }

    fn fail(stage: usize, detail: String) -> Self {
        Regularity { ok: false, verified: true, failing_stage: Some(stage), detail }
    }

    fn unverified(stage: usize, err: &Error) -> Self {
        Regularity {
            ok: true,
            verified: false,
            failing_stage: None,
            detail: format!("regularity unverified at stage {stage} ({err}), proceeding"),
        }
    }
}

/// Checks that each ideal `(f_1..f_i)` is proper and that `f_i` is a
/// nonzerodivisor modulo `(f_1..f_{i-1})`, i.e. `((f_1..f_{i-1}) : f_i) = (f_1..f_{i-1})`.
pub fn check_regular(seq: &[Poly], cfg: GroebnerConfig) -> Regularity {
    let Some(first) = seq.first() else {
        return Regularity::fail(0, "empty sequence".into());
    };
    let ring = first.ring().clone();
    for i in 0..seq.len() {
        let stage = i + 1;
        let upto = Ideal::with_config(&ring, seq[..=i].to_vec(), cfg);
        match upto.is_unit() {
            Ok(true) => return Regularity::fail(stage, format!("unit ideal at stage {stage}")),
            Ok(false) => {}
            Err(e) => return Regularity::unverified(stage, &e),
        }
        if i == 0 {
            if seq[0].is_zero() {
                return Regularity::fail(1, "f1 is zero".into());
            }
            continue;
        }
        let prev = Ideal::with_config(&ring, seq[..i].to_vec(), cfg);
        let verdict = ideal_quotient(&prev, &seq[i]).and_then(|q| prev.contains_ideal(&q));
        match verdict {
            Ok(true) => {}
            Ok(false) => {
                return Regularity::fail(
                    stage,
                    format!("f{stage} is a zero divisor modulo (f1..f{})", stage - 1),
                )
            }
            Err(e) => return Regularity::unverified(stage, &e),
        }
    }
    Regularity::pass(format!("regular sequence of length {}", seq.len()))
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

    fn ideal(gens: &[&str]) -> Ideal {
        Ideal::with_config(&ring(), gens.iter().map(|s| p(s)).collect(), GroebnerConfig::default())
    }

    fn reconstruct(m: &Membership, id: &Ideal) -> Poly {
        m.cofactors.iter().zip(id.generators()).fold(m.remainder.clone(), |acc, (c, g)| &acc + &(c * g))
    }

    #[test]
    fn variables_are_their_own_basis() {
        assert_eq!(ideal(&["x1", "x2"]).groebner().unwrap(), vec![p("x2"), p("x1")]);
    }

    #[test]
    fn basis_of_x1_squared_and_x1x2_minus_x2() {
        let id = ideal(&["x1^2", "x1*x2 - x2"]);
        let gb = id.groebner().unwrap();
        assert!(gb.contains(&p("x2")), "{gb:?}");
        // division oracle: x2 = x2·x1^2 − (x1 + 1)·(x1·x2 − x2)
        let m = ideal_member(&p("x2"), &id).unwrap();
        assert!(m.member);
        assert_eq!(reconstruct(&m, &id), p("x2"));
        let by_hand = &(&p("x2") * &p("x1^2")) - &(&p("x1 + 1") * &p("x1*x2 - x2"));
        assert_eq!(by_hand, p("x2"));
    }

    #[test]
    fn unit_ideal() {
        assert_eq!(ideal(&["1"]).groebner().unwrap(), vec![p("1")]);
        assert_eq!(ideal(&["x1", "x1 + 1"]).groebner().unwrap(), vec![p("1")]);
    }

    #[test]
    fn empty_generators_give_empty_basis() {
        assert!(ideal(&[]).groebner().unwrap().is_empty());
    }

    #[test]
    fn idempotent() {
        let id = ideal(&["x1^2 + x2*x3", "x2^2 - x1", "x3^3"]);
        let gb = id.groebner().unwrap();
        let again = Ideal::with_config(&ring(), gb.clone(), GroebnerConfig::default()).groebner().unwrap();
        assert_eq!(gb, again);
    }

    #[test]
    fn membership_examples() {
        let m = ideal_member(&p("x1*x2"), &ideal(&["x1"])).unwrap();
        assert!(m.member);
        assert_eq!(m.cofactors, vec![p("x2")]);
        assert!(m.remainder.is_zero());

        let m = ideal_member(&p("x3"), &ideal(&["x1", "x2"])).unwrap();
        assert!(!m.member);
        assert_eq!(m.remainder, p("x3"));

        let m = ideal_member(&p("x1 + x3"), &ideal(&["x1", "x2", "x3"])).unwrap();
        assert!(m.member);
        assert_eq!(m.cofactors, vec![p("1"), p("0"), p("1")]);
    }

    #[test]
    fn cofactors_survive_nontrivial_basis() {
        let id = ideal(&["x1^2 - x2", "x1*x2 - x3", "x2^2 - x1*x3"]);
        let f = &(&p("x3 + x1") * &id.generators()[0]) + &(&p("x2^2") * &id.generators()[1]);
        let m = ideal_member(&f, &id).unwrap();
        assert!(m.member);
        assert_eq!(reconstruct(&m, &id), f);
    }

    #[test]
    fn unit_mod_examples() {
        let max = ideal(&["x1", "x2", "x3"]);
        assert!(is_unit_mod(&p("1 + x1"), &max).unwrap());
        assert!(!is_unit_mod(&p("x3"), &max).unwrap());
        assert!(!is_unit_mod(&p("x3 + 2"), &ideal(&["x1", "x2"])).unwrap());
        assert_eq!(is_unit_mod(&p("x1"), &ideal(&["1"])), Err(Error::UnitIdeal));
    }

    #[test]
    fn quotient() {
        // (x1 : x1*x2) = (1)
        let q = ideal_quotient(&ideal(&["x1"]), &p("x1*x2")).unwrap();
        assert!(q.is_unit().unwrap());
        // (x1*x2 : x2) = (x1)
        let q = ideal_quotient(&ideal(&["x1*x2"]), &p("x2")).unwrap();
        assert_eq!(q.groebner().unwrap(), vec![p("x1")]);
        // (x1 : x2) = (x1)
        let q = ideal_quotient(&ideal(&["x1"]), &p("x2")).unwrap();
        assert_eq!(q.groebner().unwrap(), vec![p("x1")]);
    }

    #[test]
    fn regular_sequences() {
        let cfg = GroebnerConfig::default();
        let r = check_regular(&[p("x1"), p("x2"), p("x3")], cfg);
        assert!(r.ok && r.verified);

        let r = check_regular(&[p("x1"), p("x1*x2")], cfg);
        assert!(!r.ok);
        assert_eq!(r.failing_stage, Some(2));

        let r = check_regular(&[p("x1"), p("1 + x1")], cfg);
        assert!(!r.ok);
        assert!(r.detail.contains("unit ideal at stage 2"), "{}", r.detail);
    }

    #[test]
    fn limit_makes_regularity_unverified() {
        let cfg = GroebnerConfig { max_basis: 1, ..Default::default() };
        let r = check_regular(&[p("x1^2 + x2"), p("x1*x2 + x3"), p("x2^3 - x3")], cfg);
        assert!(r.ok);
        assert!(!r.verified);
    }

    #[test]
    fn limit_error_surfaces() {
        let cfg = GroebnerConfig { max_basis: 1, ..Default::default() };
        let id = Ideal::with_config(&ring(), vec![p("x1^2 + x2"), p("x1*x2 + x3")], cfg);
        assert_eq!(id.groebner(), Err(Error::BasisLimit { limit: 1 }));
    }
}
