#![allow(dead_code)]

use koszul_core::parse::parse_poly;
use koszul_core::poly::int;
use koszul_core::{Frac, Labels, Monomial, Poly, PolyRing};
use koszul_core::DeformationScene;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn ring(n: usize) -> PolyRing {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    PolyRing::new(&names)
}

pub fn poly(r: &PolyRing, s: &str) -> Poly {
    parse_poly(s, r).unwrap()
}

/// Up to `max_terms` terms of total degree at most `max_deg`, small integer coefficients.
pub fn random_poly(rng: &mut ChaCha8Rng, r: &PolyRing, max_terms: usize, max_deg: u32) -> Poly {
    let n = r.nvars();
    let count = rng.gen_range(0..=max_terms);
    let terms: Vec<(Monomial, _)> = (0..count)
        .map(|_| {
            let mut exps = vec![0u32; n];
            let deg = rng.gen_range(0..=max_deg);
            for _ in 0..deg {
                exps[rng.gen_range(0..n)] += 1;
            }
            let mut c = rng.gen_range(-5i64..=4);
            if c >= 0 {
                c += 1;
            }
            (Monomial::from_exponents(exps), int(c))
        })
        .collect();
    Poly::from_terms(r, terms)
}

pub fn scene(r: &PolyRing, f: &[&str], g: &[(&str, &str)], ext: &str) -> DeformationScene {
    DeformationScene::new(
        f.iter().map(|s| poly(r, s)).collect(),
        g.iter().map(|(a, b)| Frac::new(poly(r, a), poly(r, b)).unwrap()).collect(),
        poly(r, ext),
        Labels::default(),
        true,
    )
    .unwrap()
}
