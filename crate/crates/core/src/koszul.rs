//! Koszul complexes over polynomial, fractional and dual coefficients.
//!
//! `F_i = Λ^i(R^p)` with the basis `e_J`, `J` running over increasing
//! `i`-subsets of `{0..p}` in lexicographic order. `A_i: F_i → F_{i-1}` is the
//! contraction `e_J ↦ σ_i Σ_k (-1)^k h_{j_k} e_{J∖j_k}` (k 0-based) with
//! degree signs
//!
//! * `σ_1 = +1`, so `A_1` is the row `(h_1, …, h_p)`;
//! * `σ_p = -1` for `p ≥ 2`, i.e. `e_1∧…∧e_p ↦ Σ_j (-1)^j h_j e_1∧…ê_j…∧e_p`
//!   with `j` 1-based;
//! * `σ_i = (-1)^i` in between.
//!
//! The middle signs make `(1/p!)·dA_1∘…∘dA_p = dh_1∧…∧dh_p`, so the local
//! fundamental class of the complex is the plain wedge of the differentials.

use std::fmt;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};

#[derive(Clone, PartialEq)]
pub struct Matrix<C> {
    rows: usize,
    cols: usize,
    entries: Vec<C>,
}

impl<C: Coefficient> Matrix<C> {
    pub fn zeros(ring: &PolyRing, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![C::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &PolyRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, C::one(ring));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &C {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[C] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Coefficient::is_zero)
    }

    pub fn mul(&self, rhs: &Matrix<C>, ring: &PolyRing) -> Matrix<C> {
        assert_eq!(self.cols, rhs.rows, "matrix shapes");
        let mut out = Matrix::zeros(ring, self.rows, rhs.cols);
        for r in 0..self.rows {
            for c in 0..rhs.cols {
                let mut acc = C::zero(ring);
                for k in 0..self.cols {
                    let (a, b) = (self.get(r, k), rhs.get(k, c));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add_ref(&a.mul_ref(b));
                    }
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Matrix<D> {
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }
}

impl<C: Coefficient> fmt::Debug for Matrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[ {} ]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn degree_sign(i: usize, p: usize) -> bool {
    // true = negative
    if i == 1 {
        false
    } else if i == p {
        true
    } else {
        i % 2 == 1
    }
}

#[derive(Clone)]
pub struct KoszulComplex<C> {
    ring: PolyRing,
    sequence: Vec<C>,
    /// `matrices[i - 1]` is `A_i`
    matrices: Vec<Matrix<C>>,
    /// `bases[i]` labels the basis of `Λ^i`
    bases: Vec<Vec<Vec<usize>>>,
}

pub fn build_koszul<C: Coefficient>(seq: &[C]) -> Result<KoszulComplex<C>> {
    let first = seq.first().ok_or(Error::EmptySequence)?;
    let ring = first.ring().clone();
    if let Some(bad) = seq.iter().find(|h| h.ring() != &ring) {
        return Err(Error::VariableMismatch { left: ring.names().join(","), right: bad.ring().names().join(",") });
    }
    let p = seq.len();
    let bases: Vec<Vec<Vec<usize>>> = (0..=p).map(|i| subsets(p, i)).collect();
    let mut matrices = Vec::with_capacity(p);
    for i in 1..=p {
        let negative = degree_sign(i, p);
        let (rows, cols) = (&bases[i - 1], &bases[i]);
        let mut a = Matrix::zeros(&ring, rows.len(), cols.len());
        for (c, subset) in cols.iter().enumerate() {
            for k in 0..subset.len() {
                let mut face = subset.clone();
                let j = face.remove(k);
                let r = rows.binary_search(&face).expect("faces are basis elements");
                let entry = if (k % 2 == 1) != negative { seq[j].neg_ref() } else { seq[j].clone() };
                a.set(r, c, entry);
            }
        }
        matrices.push(a);
    }
    Ok(KoszulComplex { ring, sequence: seq.to_vec(), matrices, bases })
}

impl<C: Coefficient> KoszulComplex<C> {
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn length(&self) -> usize {
        self.sequence.len()
    }

    pub fn sequence(&self) -> &[C] {
        &self.sequence
    }

    /// `A_i: Λ^i → Λ^{i-1}`, `1 ≤ i ≤ p`.
    pub fn differential(&self, i: usize) -> &Matrix<C> {
        &self.matrices[i - 1]
    }

    pub fn basis(&self, i: usize) -> &[Vec<usize>] {
        &self.bases[i]
    }

    /// Checks `A_i ∘ A_{i+1} = 0` for every `i`.
    pub fn is_complex(&self) -> bool {
        (1..self.length()).all(|i| self.differential(i).mul(self.differential(i + 1), &self.ring).is_zero())
    }

    pub fn render(&self) -> String {
        let label = |s: &Vec<usize>| {
            if s.is_empty() {
                "1".to_string()
            } else {
                s.iter().map(|j| format!("e{}", j + 1)).collect::<Vec<_>>().join("^")
            }
        };
        let mut out = String::new();
        for i in (1..=self.length()).rev() {
            let a = self.differential(i);
            let cols: Vec<String> = self.basis(i).iter().map(label).collect();
            let rows: Vec<String> = self.basis(i - 1).iter().map(label).collect();
            out.push_str(&format!("A{i}: Λ^{i} -> Λ^{}  columns [{}]  rows [{}]\n", i - 1, cols.join(", "), rows.join(", ")));
            for r in 0..a.rows() {
                let row: Vec<String> = (0..a.cols()).map(|c| a.get(r, c).to_string()).collect();
                out.push_str(&format!("  [ {} ]\n", row.join(", ")));
            }
        }
        out
    }
}

impl<C: Coefficient> fmt::Debug for KoszulComplex<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Comparison maps between the Koszul complexes of a sequence and a
/// permutation of it.
#[derive(Clone, Debug)]
pub struct Comparison {
    /// `seq_b[k] = seq_a[perm[k]]`
    pub perm: Vec<usize>,
    /// `chain_maps[i] = Λ^i(T)`, constant matrices from `Λ^i` of A to `Λ^i` of B.
    pub chain_maps: Vec<Matrix<Poly>>,
    /// Determinant of the degree-1 map (the sign of the permutation).
    pub det: i32,
}

impl Comparison {
    pub fn from_permutation(ring: &PolyRing, perm: &[usize]) -> Result<Comparison> {
        let p = perm.len();
        let mut seen = vec![false; p];
        for &j in perm {
            if j >= p || std::mem::replace(&mut seen[j], true) {
                return Err(Error::NotAPermutation(format!("{perm:?}")));
            }
        }
        let mut inv = vec![0; p];
        for (k, &j) in perm.iter().enumerate() {
            inv[j] = k;
        }
        let mut chain_maps = Vec::with_capacity(p + 1);
        for i in 0..=p {
            let basis = subsets(p, i);
            let mut t = Matrix::zeros(ring, basis.len(), basis.len());
            for (c, subset) in basis.iter().enumerate() {
                let mut image: Vec<usize> = subset.iter().map(|&j| inv[j]).collect();
                let negative = sort_parity(&mut image);
                let r = basis.binary_search(&image).unwrap();
                let one = Poly::one(ring);
                t.set(r, c, if negative { -one } else { one });
            }
            chain_maps.push(t);
        }
        let det = if sort_parity(&mut perm.to_vec()) { -1 } else { 1 };
        Ok(Comparison { perm: perm.to_vec(), chain_maps, det })
    }

    pub fn chain_map<C: Coefficient>(&self, i: usize) -> Matrix<C> {
        self.chain_maps[i].map(|e| C::from_poly(e.clone()))
    }
}

fn sort_parity(v: &mut [usize]) -> bool {
    let mut negative = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    negative
}

/// Finds the permutation taking `seq_a` to `seq_b` and builds the comparison.
pub fn permute_comparison<C: Coefficient>(seq_a: &[C], seq_b: &[C]) -> Result<Comparison> {
    let first = seq_a.first().ok_or(Error::EmptySequence)?;
    if seq_a.len() != seq_b.len() {
        return Err(Error::NotAPermutation("sequences differ in length".into()));
    }
    let mut used = vec![false; seq_a.len()];
    let mut perm = Vec::with_capacity(seq_b.len());
    for (k, b) in seq_b.iter().enumerate() {
        let j = (0..seq_a.len())
            .find(|&j| !used[j] && &seq_a[j] == b)
            .ok_or_else(|| Error::NotAPermutation(format!("entry {} ({b}) has no partner", k + 1)))?;
        used[j] = true;
        perm.push(j);
    }
    Comparison::from_permutation(first.ring(), &perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::Dual;
    use crate::parse::parse_poly;
    use crate::poly::Frac;

    fn ring() -> PolyRing {
        PolyRing::new(&["x1", "x2", "x3", "x4"])
    }

    fn p(s: &str) -> Poly {
        parse_poly(s, &ring()).unwrap()
    }

    fn seq(ss: &[&str]) -> Vec<Poly> {
        ss.iter().map(|s| p(s)).collect()
    }

    #[test]
    fn length_one() {
        let k = build_koszul(&seq(&["x1^2 + x2"])).unwrap();
        assert_eq!(k.differential(1).entries(), &[p("x1^2 + x2")]);
        assert!(k.is_complex());
    }

    #[test]
    fn worked_length_two_with_fraction() {
        // (f + ε/h, g) with f, g, h = x1, x2, x3
        let r = ring();
        let inv_h = Frac::new(p("1"), p("x3")).unwrap();
        let h1 = Dual::new(Frac::from_poly(p("x1")), inv_h);
        let h2 = Dual::constant_part(Frac::from_poly(p("x2")));
        let k = build_koszul(&[h1.clone(), h2.clone()]).unwrap();
        // A2 = (g, -f - ε/h)^T, A1 = (f + ε/h, g)
        assert_eq!(k.differential(2).entries(), &[h2.clone(), h1.neg_ref()]);
        assert_eq!(k.differential(1).entries(), &[h1, h2]);
        assert!(k.differential(1).mul(k.differential(2), &r).is_zero());
    }

    #[test]
    fn top_map_matches_alternating_formula() {
        for n in 2..=5 {
            let s: Vec<Poly> = (0..n).map(|i| p(&format!("x{} + {}", i % 4 + 1, i))).collect();
            let k = build_koszul(&s).unwrap();
            let top = k.differential(n);
            for (j, sj) in s.iter().enumerate() {
                // row of e_1∧…ê_j…∧e_n; 1-based sign (-1)^(j+1)
                let face: Vec<usize> = (0..n).filter(|&x| x != j).collect();
                let r = k.basis(n - 1).iter().position(|b| *b == face).unwrap();
                let expected = if (j + 1) % 2 == 1 { -sj.clone() } else { sj.clone() };
                assert_eq!(top.get(r, 0), &expected);
            }
        }
    }

    #[test]
    fn complexes_for_many_lengths() {
        for n in 1..=6 {
            let s: Vec<Poly> = (0..n).map(|i| p(&format!("x{}^{} - {}*x4", i % 3 + 1, i % 2 + 1, i))).collect();
            let k = build_koszul(&s).unwrap();
            assert!(k.is_complex(), "length {n}");
            for i in 0..=n {
                let binom = (0..i).fold(1usize, |acc, t| acc * (n - t) / (t + 1));
                assert_eq!(k.basis(i).len(), binom);
            }
        }
    }

    #[test]
    fn empty_sequence_rejected() {
        assert!(matches!(build_koszul::<Poly>(&[]), Err(Error::EmptySequence)));
    }

    fn commutes(a: &[Poly], b: &[Poly]) -> Comparison {
        let r = ring();
        let cmp = permute_comparison(a, b).unwrap();
        let ka = build_koszul(a).unwrap();
        let kb = build_koszul(b).unwrap();
        for i in 1..=a.len() {
            let lhs = kb.differential(i).mul(&cmp.chain_map(i), &r);
            let rhs = cmp.chain_map::<Poly>(i - 1).mul(ka.differential(i), &r);
            assert_eq!(lhs, rhs, "degree {i}");
        }
        cmp
    }

    #[test]
    fn swap_first_and_last() {
        let a = seq(&["x1", "x2", "x3"]);
        let b = seq(&["x3", "x2", "x1"]);
        let cmp = commutes(&a, &b);
        assert_eq!(cmp.det, -1);
        assert_eq!(cmp.chain_maps[3].entries(), &[p("-1")]);
    }

    #[test]
    fn identity_permutation() {
        let a = seq(&["x1", "x2 + x3"]);
        let cmp = commutes(&a, &a);
        assert_eq!(cmp.det, 1);
        for (i, t) in cmp.chain_maps.iter().enumerate() {
            assert_eq!(t, &Matrix::identity(&ring(), a.len().pow(0) * subsets(2, i).len()));
        }
    }

    #[test]
    fn cyclic_shift_is_even() {
        let a = seq(&["x1", "x2", "x3"]);
        let b = seq(&["x2", "x3", "x1"]);
        assert_eq!(commutes(&a, &b).det, 1);
        let a4 = seq(&["x1", "x2", "x3", "x4"]);
        let b4 = seq(&["x4", "x2", "x3", "x1"]);
        assert_eq!(commutes(&a4, &b4).det, -1);
    }

    #[test]
    fn not_a_permutation() {
        assert!(matches!(permute_comparison(&seq(&["x1", "x2"]), &seq(&["x1", "x3"])), Err(Error::NotAPermutation(_))));
        assert!(Comparison::from_permutation(&ring(), &[0, 0]).is_err());
    }
}
