//! The map π from first-order deformations to `H^p_y(Ω^{p-1})`, the
//! Case 1 / Case 2 split, the corrector `Z′` and the Milnor-cycle check.

use std::fmt;

use crate::chern::{fundamental_class_via, truncate, Route};
use crate::cousin::{boundary_of_sum, SumBoundary};
use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::koszul::build_koszul;
use crate::localcoh::LocalCohClass;
use crate::poly::{check_regular, ideal_member, Frac, GroebnerConfig, Ideal, Poly, PolyRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labels {
    /// Generic point of `Y`.
    pub y: String,
    /// The codimension-(p+1) test point.
    pub w: String,
}

impl Default for Labels {
    fn default() -> Self {
        Labels { y: "y".into(), w: "w".into() }
    }
}

/// `Y′ = (f_1 + ε g_1, …, f_p + ε g_p)` together with the extension
/// `f_{p+1}` cutting out `w`.
#[derive(Clone, Debug)]
pub struct DeformationScene {
    pub ring: PolyRing,
    pub f: Vec<Poly>,
    pub g: Vec<Frac>,
    pub extension: Poly,
    pub labels: Labels,
    /// Whether regularity was checked on construction.
    pub check_regular: bool,
    /// Non-fatal findings from validation.
    pub warnings: Vec<String>,
}

impl DeformationScene {
    /// Builds and validates a scene. With `check` set, a sequence that is
    /// definitely not regular is rejected; an unfinished check only warns.
    pub fn new(f: Vec<Poly>, g: Vec<Frac>, extension: Poly, labels: Labels, check: bool) -> Result<Self> {
        let ring = f.first().ok_or_else(|| Error::scene("f", "at least one generator is required"))?.ring().clone();
        if g.len() != f.len() {
            return Err(Error::scene("g", format!("expected {} entries, found {}", f.len(), g.len())));
        }
        if f.iter().map(Poly::ring).chain(g.iter().map(Frac::ring)).chain([extension.ring()]).any(|r| r != &ring) {
            return Err(Error::scene("variables", "all polynomials must share the variable list"));
        }
        let ideal = Ideal::new(&ring, f.clone());
        for (i, gi) in g.iter().enumerate() {
            if !gi.is_poly() && ideal.contains(gi.den())? {
                return Err(Error::LocalizationViolation { denominator: format!("{} (g{})", gi.den(), i + 1), ideal: ideal.to_string() });
            }
        }
        let mut warnings = Vec::new();
        if check {
            let cfg = GroebnerConfig::from_env();
            let mut extended = f.clone();
            extended.push(extension.clone());
            for (field, seq) in [("f", &f), ("extension", &extended)] {
                let r = check_regular(seq, cfg);
                if !r.ok {
                    return Err(Error::scene(field, format!("not a regular sequence: {}", r.detail)));
                }
                if !r.verified {
                    warnings.push(format!("{field}: {}", r.detail));
                }
            }
        }
        Ok(DeformationScene { ring, f, g, extension, labels, check_regular: check, warnings })
    }

    pub fn p(&self) -> usize {
        self.f.len()
    }

    pub fn lifted(&self) -> Vec<Dual<Frac>> {
        self.f.iter().zip(&self.g).map(|(f, g)| Dual::new(Frac::from_poly(f.clone()), g.clone())).collect()
    }

    /// Indices of the nonzero perturbations.
    pub fn perturbed_slots(&self) -> Vec<usize> {
        (0..self.p()).filter(|&i| !self.g[i].is_zero()).collect()
    }

    /// The same scene with only `g_slot` kept.
    pub fn single(&self, slot: usize) -> DeformationScene {
        let g = (0..self.p()).map(|i| if i == slot { self.g[i].clone() } else { Frac::zero(&self.ring) }).collect();
        DeformationScene { g, ..self.clone() }
    }
}

/// `π(Y′)`: truncated fundamental class of the lifted Koszul complex.
pub fn pi(scene: &DeformationScene, route: Route) -> Result<LocalCohClass> {
    let k = build_koszul(&scene.lifted())?;
    let rep = truncate(&fundamental_class_via(&k, route)?);
    let class = LocalCohClass::new(scene.labels.y.clone(), scene.f.clone(), rep.numerator)?;
    class.localized(Ideal::new(&scene.ring, scene.f.clone()))
}

/// `π` of each single-perturbation piece; their sum is `π(Y′)`.
pub fn pi_parts(scene: &DeformationScene, route: Route) -> Result<Vec<LocalCohClass>> {
    let slots = scene.perturbed_slots();
    if slots.len() <= 1 {
        return Ok(vec![pi(scene, route)?]);
    }
    slots.into_iter().map(|s| pi(&scene.single(s), route)).collect()
}

/// Boundary of `π(Y′)` at the scene's `w`, splitting by perturbation.
pub fn scene_boundary(scene: &DeformationScene, route: Route) -> Result<SumBoundary> {
    let parts = pi_parts(scene, route)?;
    let summands: Vec<(LocalCohClass, Poly)> = parts.into_iter().map(|c| (c, scene.extension.clone())).collect();
    boundary_of_sum(&summands, &scene.labels.w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    /// `b ∉ (f_1..f_{p+1})`: `π(Y′)` already has vanishing boundary at `w`.
    One,
    /// `b ∈ (f_1..f_{p+1})`: a corrector is needed.
    Two,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::One => "1",
            Case::Two => "2",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub case: Case,
    /// Slot of the single perturbation, if any.
    pub slot: Option<usize>,
    pub denominator: Poly,
    /// Cofactors of `b` in `(f_1..f_{p+1})`; the last one is `u`.
    pub cofactors: Vec<Poly>,
    pub decomposition: Vec<String>,
}

fn full_ideal(scene: &DeformationScene) -> (Vec<Poly>, Ideal) {
    let mut gens = scene.f.clone();
    gens.push(scene.extension.clone());
    let ideal = Ideal::new(&scene.ring, gens.clone());
    (gens, ideal)
}

pub fn classify_case(scene: &DeformationScene) -> Result<Classification> {
    let slots = scene.perturbed_slots();
    if slots.len() > 1 {
        return Err(Error::unsupported(
            format!("{} nonzero perturbations; classification needs a single g (split by linearity)", slots.len()),
            Vec::new(),
        ));
    }
    let slot = slots.first().copied();
    let b = slot.map_or_else(|| Poly::one(&scene.ring), |s| scene.g[s].den().clone());
    let (gens, ideal) = full_ideal(scene);
    let m = ideal_member(&b, &ideal)?;
    let decomposition = if m.member {
        let mut d = vec![format!("b = {b}")];
        for (i, (a, f)) in m.cofactors.iter().zip(&gens).enumerate() {
            let name = if i + 1 == gens.len() { "u".into() } else { format!("a{}", i + 1) };
            d.push(format!("{name} = {a}  (times {f})"));
        }
        d
    } else {
        Vec::new()
    };
    let case = if slot.is_some() && m.member { Case::Two } else { Case::One };
    Ok(Classification { case, slot, denominator: b, cofactors: m.cofactors, decomposition })
}

#[derive(Clone, Debug)]
pub struct CorrectorResult {
    pub classification: Classification,
    /// `Z′` as a scene; `None` when no corrector is needed.
    pub corrector: Option<DeformationScene>,
    pub certificate: SumBoundary,
    pub milnor_member: bool,
}

impl CorrectorResult {
    pub fn z_sequence(&self) -> Option<&[Poly]> {
        self.corrector.as_ref().map(|s| s.f.as_slice())
    }

    pub fn zprime_perturbation(&self) -> Option<&[Frac]> {
        self.corrector.as_ref().map(|s| s.g.as_slice())
    }
}

/// Builds `Z′` for a Case 2 scene: with the perturbation `a/b` in slot `k`
/// and `b ≡ c·f_{p+1}`, `Z′` swaps `f_k` for `f_{p+1}` and carries
/// `(a/c)/f_k` in slot `k`. Case 1 scenes get no corrector.
pub fn correct(scene: &DeformationScene, route: Route) -> Result<CorrectorResult> {
    let classification = classify_case(scene)?;
    let y = pi(scene, route)?;
    let Some(k) = classification.slot.filter(|_| classification.case == Case::Two) else {
        let certificate = boundary_of_sum(&[(y, scene.extension.clone())], &scene.labels.w)?;
        let milnor_member = certificate.is_zero()?;
        return Ok(CorrectorResult { classification, corrector: None, certificate, milnor_member });
    };
    let base = Ideal::new(&scene.ring, scene.f.clone());
    let u = classification.cofactors.last().expect("extension cofactor");
    let reduced = base.normal_form(u)?;
    let c = match reduced.constant_value() {
        Some(c) if !reduced.is_zero() => c,
        _ => {
            return Err(Error::unsupported(
                format!("cofactor u = {u} of the extension is not a nonzero constant modulo ({base})"),
                classification.decomposition.clone(),
            ))
        }
    };
    let a = scene.g[k].num().clone();
    let mut z = scene.f.clone();
    z[k] = scene.extension.clone();
    let mut gz = vec![Frac::zero(&scene.ring); scene.p()];
    gz[k] = Frac::new(a, scene.f[k].scale(&c)).expect("nonzero generator");
    let labels = Labels { y: "z".into(), w: scene.labels.w.clone() };
    let corrector = DeformationScene::new(z, gz, scene.f[k].clone(), labels, false)?;
    let zc = pi(&corrector, route)?;
    let certificate =
        boundary_of_sum(&[(y, scene.extension.clone()), (zc, corrector.extension.clone())], &scene.labels.w)?;
    let milnor_member = certificate.is_zero()?;
    Ok(CorrectorResult { classification, corrector: Some(corrector), certificate, milnor_member })
}

/// Whether the Koszul classes of `scenes` sum to a Milnor K-cycle, tested
/// through the vanishing of the boundary of `Σ π` at the common `w`.
pub fn verify_milnor_cycle(scenes: &[DeformationScene], route: Route) -> Result<(bool, SumBoundary)> {
    let mut summands = Vec::new();
    for s in scenes {
        for c in pi_parts(s, route)? {
            summands.push((c, s.extension.clone()));
        }
    }
    let w = scenes.first().ok_or(Error::EmptySequence)?.labels.w.clone();
    let sum = boundary_of_sum(&summands, &w)?;
    Ok((sum.is_zero()?, sum))
}
