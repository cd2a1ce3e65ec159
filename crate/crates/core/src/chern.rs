//! Local fundamental class of a Koszul complex over `R[ε]` and its
//! ε-truncation.
//!
//! Three routes to the same numerator:
//!
//! * brute force: `(1/p!)·dA_1∘dA_2∘…∘dA_p`, a `1×1` matrix of `p`-forms;
//! * closed form: `dh_1∧…∧dh_p`;
//! * truncation formula: `Σ_k (-1)^(k-1) g_k·df_1∧…∧(df_k omitted)∧…∧df_p`,
//!   which is what the `dε`-contraction of the closed form leaves behind.

use num_bigint::BigInt;

use crate::coeff::{Coefficient, Differentiable};
use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::forms::{contract_eps, wedge_of_differentials, DiffForm};
use crate::koszul::{KoszulComplex, Matrix};
use crate::poly::{PolyRing, Rational};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Route {
    /// Wedge of the differentials of the sequence.
    #[default]
    ClosedForm,
    /// Matrix composition of the differentials.
    BruteForce,
    /// Brute force, cross-checked against the closed form.
    Checked,
}

#[derive(Clone, Debug)]
pub struct FundClass<C: Coefficient> {
    pub complex: KoszulComplex<Dual<C>>,
    /// The `F_p → F_0 ⊗ Ω^p` component.
    pub component: DiffForm<Dual<C>>,
}

/// Truncated class: `[numerator | denominators]`.
#[derive(Clone, Debug, PartialEq)]
pub struct NewtonRep<C: Coefficient> {
    pub denominators: Vec<C>,
    pub numerator: DiffForm<C>,
}

fn factorial(p: usize) -> Rational {
    Rational::from_integer((1..=p).fold(BigInt::from(1), |acc, k| acc * k))
}

/// `(1/p!)·dM_1∘…∘dM_p` for a chain of matrices whose first has one row and
/// whose last has one column. Forms are wedged in matrix-product order.
pub fn composite_form<C: Differentiable>(ring: &PolyRing, matrices: &[Matrix<C>]) -> Result<DiffForm<C>> {
    let first = matrices.first().ok_or(Error::EmptySequence)?;
    let last = matrices.last().unwrap();
    if first.rows() != 1 || last.cols() != 1 || matrices.windows(2).any(|w| w[0].cols() != w[1].rows()) {
        return Err(Error::unsupported("composite needs a 1×1 end-to-end component", Vec::new()));
    }
    let mut row: Vec<DiffForm<C>> = (0..first.cols()).map(|c| first.get(0, c).differential()).collect();
    for m in &matrices[1..] {
        let dm: Vec<DiffForm<C>> = m.entries().iter().map(Differentiable::differential).collect();
        let degree = row[0].degree() + 1;
        row = (0..m.cols())
            .map(|c| {
                let mut acc = DiffForm::zero(ring, degree);
                for (k, w) in row.iter().enumerate() {
                    let entry = &dm[k * m.cols() + c];
                    if !w.is_zero() && !entry.is_zero() {
                        acc = acc.add(&w.wedge(entry));
                    }
                }
                acc
            })
            .collect();
    }
    let inv = Rational::from_integer(1.into()) / factorial(matrices.len());
    Ok(row[0].scale(&inv))
}

/// Brute-force fundamental class.
pub fn fundamental_class<C: Differentiable>(k: &KoszulComplex<Dual<C>>) -> FundClass<C> {
    let mats: Vec<Matrix<Dual<C>>> = (1..=k.length()).map(|i| k.differential(i).clone()).collect();
    let component = composite_form(k.ring(), &mats).expect("Koszul complexes have 1×1 end components");
    FundClass { complex: k.clone(), component }
}

/// Closed-form fundamental class `dh_1∧…∧dh_p`.
pub fn fundamental_class_closed<C: Differentiable>(k: &KoszulComplex<Dual<C>>) -> FundClass<C> {
    let component = wedge_of_differentials(k.ring(), k.sequence());
    FundClass { complex: k.clone(), component }
}

pub fn fundamental_class_via<C: Differentiable>(k: &KoszulComplex<Dual<C>>, route: Route) -> Result<FundClass<C>> {
    match route {
        Route::ClosedForm => Ok(fundamental_class_closed(k)),
        Route::BruteForce => Ok(fundamental_class(k)),
        Route::Checked => {
            let brute = fundamental_class(k);
            let closed = wedge_of_differentials(k.ring(), k.sequence());
            if brute.component != closed {
                return Err(Error::OracleMismatch(format!("composite {} vs wedge {}", brute.component, closed)));
            }
            Ok(brute)
        }
    }
}

/// `⌟ ∂/∂ε |_{ε=0}` of the component, over the `ε = 0` sequence.
pub fn truncate<C: Coefficient>(fc: &FundClass<C>) -> NewtonRep<C> {
    NewtonRep {
        denominators: fc.complex.sequence().iter().map(Dual::set_eps_zero).collect(),
        numerator: contract_eps(&fc.component),
    }
}

/// `Σ_k (-1)^(k-1) g_k ⋀_{j≠k} df_j`
pub fn truncation_formula<C: Differentiable>(ring: &PolyRing, f: &[C], g: &[C]) -> DiffForm<C> {
    assert_eq!(f.len(), g.len());
    let p = f.len();
    let mut out = DiffForm::zero(ring, p.saturating_sub(1));
    for (k, gk) in g.iter().enumerate() {
        if gk.is_zero() {
            continue;
        }
        let others: Vec<C> = (0..p).filter(|&j| j != k).map(|j| f[j].clone()).collect();
        let term = wedge_of_differentials(ring, &others).mul_coefficient(gk);
        out = out.add(&if k % 2 == 1 { term.neg() } else { term });
    }
    out
}
