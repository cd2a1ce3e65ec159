//! Acceptance criteria 1-6. Each prints one PASS/FAIL line; the test fails if
//! any criterion does.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{poly, random_poly, ring, scene};
use koszul_core::chern::{fundamental_class, fundamental_class_closed, truncate, truncation_formula};
use koszul_core::forms::{d, exterior_derivative};
use koszul_core::localcoh::{align_to, class_equal, permute_denominators};
use koszul_core::poly::ideal_member;
use koszul_core::tangent::pi_parts;
use koszul_core::{
    boundary, build_koszul, class_is_zero, correct, pi, verify_milnor_cycle, DeformationScene, DiffForm, Dual, Frac,
    Ideal, LocalCohClass, Poly, Route,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn criterion_1() -> Outcome {
    let r = ring(3);
    let s = scene(&r, &["x1", "x2"], &[("1", "x3"), ("0", "1")], "x3");
    let y = pi(&s, Route::ClosedForm).map_err(|e| e.to_string())?;
    let expected = DiffForm::monomial(Frac::new(poly(&r, "1"), poly(&r, "x3")).unwrap(), &[1]);
    ensure!(y.numerator == expected, "pi = {y}");
    ensure!(y.denominators == vec![poly(&r, "x1"), poly(&r, "x2")], "denominators of {y}");
    let b = boundary(&y, &s.extension, "w").map_err(|e| e.to_string())?;
    ensure!(b.output.numerator == DiffForm::monomial(Frac::from_poly(poly(&r, "1")), &[1]), "boundary = {}", b.output);
    ensure!(!class_is_zero(&b.output).unwrap(), "boundary vanished");
    Ok(format!("pi = {y}; boundary = {} (nonzero)", b.output))
}

fn criterion_2() -> Outcome {
    let r = ring(3);
    let s = scene(&r, &["x1", "x2"], &[("1", "1 + x1"), ("0", "1")], "x3");
    let y = pi(&s, Route::ClosedForm).map_err(|e| e.to_string())?;
    let b = boundary(&y, &s.extension, "w").map_err(|e| e.to_string())?;
    ensure!(class_is_zero(&b.output).unwrap(), "boundary {} is not zero", b.output);
    Ok(format!("boundary of {y} is zero ({})", b.case_tag))
}

fn case_two_scenes() -> Vec<DeformationScene> {
    let mut out = Vec::new();
    let r3 = ring(3);
    let r4 = ring(4);
    for a in ["1", "x1", "x2 + 3"] {
        out.push(scene(&r3, &["x1", "x2"], &[(a, "x3"), ("0", "1")], "x3"));
        out.push(scene(&r4, &["x1", "x2", "x3"], &[(a, "x4"), ("0", "1"), ("0", "1")], "x4"));
    }
    out
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for s in case_two_scenes() {
        let p = s.p();
        let ext = s.extension.clone();
        let a = s.g[0].num().clone();
        let res = correct(&s, Route::Checked).map_err(|e| e.to_string())?;
        let mut z_expected = s.f.clone();
        z_expected[0] = ext.clone();
        ensure!(res.z_sequence() == Some(&z_expected[..]), "Z = {:?}", res.z_sequence());
        let g0 = Frac::new(a.clone(), s.f[0].clone()).unwrap();
        let zp = res.zprime_perturbation().unwrap();
        ensure!(zp[0] == g0 && zp[1..].iter().all(Frac::is_zero), "Z' perturbation {:?}", zp);
        // ∂π(Z′) = −∂π(Y′) after the det = −1 permutation
        let y_out = &res.certificate.parts[0].output;
        let z_out = &res.certificate.parts[1].output;
        let mut swap: Vec<usize> = (0..=p).collect();
        swap.swap(0, p);
        let z_perm = permute_denominators(z_out, &swap).map_err(|e| e.to_string())?;
        ensure!(z_perm.denominators == y_out.denominators, "permuted denominators differ");
        ensure!(z_perm.numerator == y_out.numerator.neg(), "{z_perm} is not -{y_out}");
        ensure!(res.milnor_member && res.certificate.is_zero().unwrap(), "sum boundary nonzero for a = {a}");
        checked += 1;
    }
    Ok(format!("{checked} Case-2 scenes corrected, sum boundaries zero"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let r = ring(4);
    for trial in 0..50 {
        let p = trial % 3 + 1;
        let f: Vec<Poly> = (0..p).map(|_| random_poly(&mut rng, &r, 3, 3)).collect();
        let g: Vec<Poly> = (0..p).map(|_| random_poly(&mut rng, &r, 3, 3)).collect();
        let seq: Vec<Dual<Poly>> = f.iter().zip(&g).map(|(f, g)| Dual::new(f.clone(), g.clone())).collect();
        let k = build_koszul(&seq).map_err(|e| e.to_string())?;
        let brute = fundamental_class(&k);
        let closed = fundamental_class_closed(&k);
        ensure!(brute.component == closed.component, "trial {trial}: composite {} vs wedge {}", brute.component, closed.component);
        ensure!(truncate(&brute).numerator == truncation_formula(&r, &f, &g), "trial {trial}: truncation formula");
        // single perturbation: g1·df2∧…∧dfp
        let mut single = f.iter().cloned().map(Dual::constant_part).collect::<Vec<_>>();
        single[0] = Dual::new(f[0].clone(), g[0].clone());
        let k1 = build_koszul(&single).map_err(|e| e.to_string())?;
        let expected = f[1..].iter().fold(DiffForm::scalar(g[0].clone()), |acc, fj| acc.wedge(&d(fj)));
        ensure!(truncate(&fundamental_class(&k1)).numerator == expected, "trial {trial}: g1 df2 ^ ... ^ dfp");
    }
    Ok("50 random complexes: composite = wedge, truncation matches".into())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let r3 = ring(3);
    let r4 = ring(4);

    for i in 0..200 {
        let f = random_poly(&mut rng, &r4, 4, 4);
        let g = random_poly(&mut rng, &r4, 4, 3);
        ensure!(exterior_derivative(&d(&f)).is_zero(), "d∘d ≠ 0 on sample {i}");
        let lhs = d(&(&f * &g));
        let rhs = d(&g).mul_coefficient(&f).add(&d(&f).mul_coefficient(&g));
        ensure!(lhs == rhs, "Leibniz fails on sample {i}");
    }

    for p in 1..=5 {
        for _ in 0..4 {
            let seq: Vec<Dual<Poly>> =
                (0..p).map(|_| Dual::new(random_poly(&mut rng, &r4, 3, 3), random_poly(&mut rng, &r4, 2, 2))).collect();
            let k = build_koszul(&seq).map_err(|e| e.to_string())?;
            ensure!(k.is_complex(), "A_i A_(i+1) ≠ 0 for p = {p}");
        }
    }

    let dens = vec![poly(&r3, "x1^2 + x2"), poly(&r3, "x2 - x3")];
    for i in 0..100 {
        let w: DiffForm<Frac> = (0..3).fold(DiffForm::zero(&r3, 1), |acc, s| {
            acc.add(&DiffForm::monomial(Frac::from_poly(random_poly(&mut rng, &r3, 3, 2)), &[s]))
        });
        let shift: DiffForm<Frac> = (0..3).fold(DiffForm::zero(&r3, 1), |acc, s| {
            let m = &(&random_poly(&mut rng, &r3, 2, 2) * &dens[0]) + &(&random_poly(&mut rng, &r3, 2, 2) * &dens[1]);
            acc.add(&DiffForm::monomial(Frac::from_poly(m), &[s]))
        });
        let c = LocalCohClass::new("y", dens.clone(), w.clone()).unwrap();
        let shifted = LocalCohClass::new("y", dens.clone(), w.add(&shift)).unwrap();
        ensure!(class_is_zero(&c).unwrap() == class_is_zero(&shifted).unwrap(), "shift {i} changed the verdict");
        ensure!(class_equal(&c, &shifted).unwrap(), "shift {i} changed the class");
    }

    let trio = vec![poly(&r3, "x1"), poly(&r3, "x2"), poly(&r3, "x3")];
    for _ in 0..50 {
        let w = DiffForm::monomial(Frac::from_poly(random_poly(&mut rng, &r3, 3, 2)), &[rng.gen_range(0..3)]);
        let c = LocalCohClass::new("w", trio.clone(), w).unwrap();
        let (i, j) = (rng.gen_range(0..3), rng.gen_range(0..3));
        let mut perm = vec![0, 1, 2];
        perm.swap(i, j);
        let once = permute_denominators(&c, &perm).unwrap();
        let twice = permute_denominators(&once, &perm).unwrap();
        ensure!(twice.numerator == c.numerator && twice.denominators == c.denominators, "involution fails");
        if i != j {
            ensure!(once.numerator == c.numerator.neg(), "transposition did not negate");
        }
        ensure!(align_to(&once, &trio).unwrap().numerator == c.numerator, "realignment");
    }

    for i in 0..20 {
        let a = random_poly(&mut rng, &r3, 3, 2);
        let b = random_poly(&mut rng, &r3, 3, 2);
        let mk = |x: &Poly| {
            DeformationScene::new(
                vec![poly(&r3, "x1"), poly(&r3, "x2")],
                vec![Frac::new(x.clone(), poly(&r3, "x3")).unwrap(), Frac::zero(&r3)],
                poly(&r3, "x3"),
                Default::default(),
                false,
            )
            .unwrap()
        };
        let sum = pi(&mk(&(&a + &b)), Route::ClosedForm).unwrap();
        let parts = pi(&mk(&a), Route::ClosedForm).unwrap().add(&pi(&mk(&b), Route::ClosedForm).unwrap()).unwrap();
        ensure!(sum.numerator == parts.numerator, "π not linear on sample {i}");
    }
    let two = scene(&r3, &["x1", "x2"], &[("x2", "x3"), ("x1 + 1", "x3 + 2")], "x3");
    let split = pi_parts(&two, Route::ClosedForm).unwrap();
    ensure!(split[0].add(&split[1]).unwrap().numerator == pi(&two, Route::ClosedForm).unwrap().numerator, "split π");

    for i in 0..100 {
        let gens: Vec<Poly> = match i % 3 {
            0 => vec![poly(&r3, "x1^2 - x2"), poly(&r3, "x1*x2 - x3")],
            1 => vec![poly(&r3, "x1 + x2*x3"), poly(&r3, "x2^2 - 1"), poly(&r3, "x3^3")],
            _ => vec![random_poly(&mut rng, &r3, 2, 2), poly(&r3, "x3 - x1")],
        };
        let ideal = Ideal::new(&r3, gens.clone());
        let f = gens.iter().fold(Poly::zero(&r3), |acc, g| &acc + &(&random_poly(&mut rng, &r3, 3, 2) * g));
        let m = ideal_member(&f, &ideal).map_err(|e| e.to_string())?;
        ensure!(m.member, "member {i} not recognised");
        let rebuilt = gens.iter().zip(&m.cofactors).fold(m.remainder.clone(), |acc, (g, c)| &acc + &(c * g));
        ensure!(rebuilt == f, "cofactors of member {i} do not reconstruct it");
    }
    Ok("d∘d, Leibniz, complexes, shifts, sign involution, linearity, cofactors".into())
}

fn criterion_6() -> Outcome {
    let mut pairs = 0;
    for s in case_two_scenes() {
        let res = correct(&s, Route::ClosedForm).map_err(|e| e.to_string())?;
        let pair = [s, res.corrector.unwrap()];
        ensure!(verify_milnor_cycle(&pair, Route::ClosedForm).unwrap().0, "corrected pair rejected");
        pairs += 1;
    }
    let r3 = ring(3);
    let r4 = ring(4);
    let case_one = [
        scene(&r3, &["x1", "x2"], &[("1", "1 + x1"), ("0", "1")], "x3"),
        scene(&r3, &["x1", "x2"], &[("x3", "1"), ("0", "1")], "x3"),
        scene(&r4, &["x1", "x2", "x3"], &[("x2", "2 + x4"), ("0", "1"), ("0", "1")], "x4"),
    ];
    for s in &case_one {
        ensure!(verify_milnor_cycle(std::slice::from_ref(s), Route::ClosedForm).unwrap().0, "case-1 scene rejected");
    }
    let lone = scene(&r3, &["x1", "x2"], &[("1", "x3"), ("0", "1")], "x3");
    ensure!(!verify_milnor_cycle(&[lone], Route::ClosedForm).unwrap().0, "example scene accepted");
    Ok(format!("{pairs} corrected pairs and {} case-1 scenes certified; example rejected", case_one.len()))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

#[test]
fn acceptance() {
    let criteria: [Criterion; 6] = [
        ("example reproduction", criterion_1, Duration::from_secs(1)),
        ("unit-denominator lemma", criterion_2, Duration::from_secs(1)),
        ("case 2 corrector", criterion_3, Duration::from_secs(5)),
        ("chern oracle equivalence", criterion_4, Duration::from_secs(10)),
        ("property suites", criterion_5, Duration::from_secs(30)),
        ("milnor certification", criterion_6, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (i, (name, run, bound)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= bound {
                Ok(msg)
            } else {
                Err(format!("took {elapsed:.2?}, bound {bound:?}"))
            }
        });
        match outcome {
            Ok(msg) => println!("PASS criterion {} ({name}, {elapsed:.2?}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} ({name}, {elapsed:.2?}): {msg}", i + 1);
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
