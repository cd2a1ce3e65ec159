//! Exterior algebra of Kähler differentials over ℚ.
//!
//! A form is a map from strictly increasing slot tuples to coefficients.
//! Slot `i < nvars` is `dx_i`; over dual coefficients slot `nvars` is `dε`,
//! placed after every `dx_i`.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::{Coefficient, Differentiable};
use crate::dual::Dual;
use crate::poly::{Frac, Poly, PolyRing, Rational};

#[derive(Clone, PartialEq)]
pub struct DiffForm<C> {
    ring: PolyRing,
    degree: usize,
    terms: BTreeMap<Vec<usize>, C>,
}

/// Sorts `slots`, returning the permutation sign, or `None` on a repeated slot.
fn sort_with_sign(slots: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    // insertion sort keeps track of transpositions
    for i in 1..slots.len() {
        let mut j = i;
        while j > 0 && slots[j - 1] > slots[j] {
            slots.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if slots.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(negative)
}

impl<C: Coefficient> DiffForm<C> {
    pub fn zero(ring: &PolyRing, degree: usize) -> Self {
        DiffForm { ring: ring.clone(), degree, terms: BTreeMap::new() }
    }

    /// The 0-form `c`.
    pub fn scalar(c: C) -> Self {
        let mut f = Self::zero(c.ring(), 0);
        f.insert(Vec::new(), c);
        f
    }

    /// Number of exterior generators: the variables, plus `dε` over dual coefficients.
    pub fn num_slots(ring: &PolyRing) -> usize {
        ring.nvars() + usize::from(C::HAS_EPS)
    }

    /// `c · d(slot_1) ∧ … ∧ d(slot_k)` for slots in any order.
    pub fn monomial(c: C, slots: &[usize]) -> Self {
        let ring = c.ring().clone();
        let n = Self::num_slots(&ring);
        assert!(slots.iter().all(|&s| s < n), "slot out of range");
        let mut sorted = slots.to_vec();
        let mut f = Self::zero(&ring, slots.len());
        if let Some(negative) = sort_with_sign(&mut sorted) {
            f.insert(sorted, if negative { c.neg_ref() } else { c });
        }
        f
    }

    /// `dx_index`
    pub fn dx(ring: &PolyRing, index: usize) -> Self {
        Self::monomial(C::one(ring), &[index])
    }

    fn insert(&mut self, slots: Vec<usize>, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(slots) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add_ref(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &C)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coefficient(&self, slots: &[usize]) -> C {
        self.terms.get(slots).cloned().unwrap_or_else(|| C::zero(&self.ring))
    }

    fn check(&self, rhs: &Self) {
        assert_eq!(self.ring, rhs.ring, "forms over different rings");
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.check(rhs);
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.insert(k.clone(), v.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg_ref())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Multiplication by a coefficient.
    pub fn mul_coefficient(&self, c: &C) -> Self {
        let mut out = Self::zero(&self.ring, self.degree);
        for (k, v) in &self.terms {
            out.insert(k.clone(), v.mul_ref(c));
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = Self::zero(&self.ring, self.degree);
        for (k, v) in &self.terms {
            out.insert(k.clone(), v.scale(r));
        }
        out
    }

    /// Coefficient-wise map, keeping the slot structure. Slots that do not
    /// exist in the target (a `dε` slot mapped to a ring without one) are a
    /// logic error.
    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> DiffForm<D> {
        let limit = DiffForm::<D>::num_slots(&self.ring);
        let mut out = DiffForm::zero(&self.ring, self.degree);
        for (k, v) in &self.terms {
            assert!(k.iter().all(|&s| s < limit), "slot does not exist in target ring");
            out.insert(k.clone(), f(v));
        }
        out
    }

    pub fn wedge(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let mut out = Self::zero(&self.ring, self.degree + rhs.degree);
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                let mut slots: Vec<usize> = ka.iter().chain(kb).copied().collect();
                let Some(negative) = sort_with_sign(&mut slots) else { continue };
                let c = va.mul_ref(vb);
                out.insert(slots, if negative { c.neg_ref() } else { c });
            }
        }
        out
    }

    fn slot_name(&self, s: usize) -> String {
        match self.ring.names().get(s) {
            Some(name) => format!("d{name}"),
            None => "deps".to_string(),
        }
    }
}

/// `d f`
pub fn d<C: Differentiable>(f: &C) -> DiffForm<C> {
    f.differential()
}

/// `d(h_1) ∧ … ∧ d(h_k)`
pub fn wedge_of_differentials<C: Differentiable>(ring: &PolyRing, hs: &[C]) -> DiffForm<C> {
    hs.iter().fold(DiffForm::scalar(C::one(ring)), |acc, h| acc.wedge(&h.differential()))
}

/// `d(Σ c_I dx_I) = Σ dc_I ∧ dx_I`
pub fn exterior_derivative<C: Differentiable>(w: &DiffForm<C>) -> DiffForm<C> {
    let one = C::one(w.ring());
    w.terms().fold(DiffForm::zero(w.ring(), w.degree() + 1), |acc, (s, c)| {
        acc.add(&c.differential().wedge(&DiffForm::monomial(one.clone(), s)))
    })
}

impl Differentiable for Poly {
    fn differential(&self) -> DiffForm<Poly> {
        let ring = self.ring().clone();
        let mut out = DiffForm::zero(&ring, 1);
        for i in 0..ring.nvars() {
            out.insert(vec![i], self.derivative(i));
        }
        out
    }
}

impl Differentiable for Frac {
    fn differential(&self) -> DiffForm<Frac> {
        let ring = self.ring().clone();
        let mut out = DiffForm::zero(&ring, 1);
        if self.is_poly() {
            return self.num().differential().map(|c| Frac::from_poly(c.clone()));
        }
        for i in 0..ring.nvars() {
            out.insert(vec![i], self.partial(i));
        }
        out
    }
}

impl<C: Differentiable> Differentiable for Dual<C> {
    /// `d(a + εb) = da + ε·db + b·dε`
    fn differential(&self) -> DiffForm<Dual<C>> {
        let ring = self.ring().clone();
        let da = self.base().differential().map(|c| Dual::constant_part(c.clone()));
        let db = self.eps().differential().map(|c| Dual::pure_eps(c.clone()));
        let b_deps = DiffForm::monomial(Dual::constant_part(self.eps().clone()), &[ring.nvars()]);
        da.add(&db).add(&b_deps)
    }
}

/// Interior product with `∂/∂ε` followed by `ε = 0`.
///
/// The `dε` slot sits at position `j` (1-based) of its tuple and contributes
/// the sign `(-1)^(j-1)`. Terms without `dε` map to zero.
pub fn contract_eps<C: Coefficient>(w: &DiffForm<Dual<C>>) -> DiffForm<C> {
    let ring = w.ring().clone();
    let eps_slot = ring.nvars();
    let mut out = DiffForm::zero(&ring, w.degree().saturating_sub(1));
    for (slots, c) in w.terms() {
        let Some(pos) = slots.iter().position(|&s| s == eps_slot) else { continue };
        let rest: Vec<usize> = slots.iter().copied().filter(|&s| s != eps_slot).collect();
        let base = c.set_eps_zero();
        out.insert(rest, if pos % 2 == 1 { base.neg_ref() } else { base });
    }
    out
}

impl<C: Coefficient> fmt::Display for DiffForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let one = C::one(&self.ring);
        for (i, (slots, c)) in self.terms.iter().enumerate() {
            let wedge: Vec<String> = slots.iter().map(|&s| self.slot_name(s)).collect();
            let wedge = wedge.join("^");
            let negated = c.neg_ref();
            let negative = !c.is_compound() && c.to_string().starts_with('-');
            let shown = if negative { &negated } else { c };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if slots.is_empty() {
                write!(f, "{shown}")?;
            } else if *shown == one {
                f.write_str(&wedge)?;
            } else if shown.is_compound() {
                write!(f, "({shown}) * {wedge}")?;
            } else {
                write!(f, "{shown} * {wedge}")?;
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for DiffForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffForm[{}]({self})", self.degree)
    }
}
