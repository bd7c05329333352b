//! Seeded random corpora of reduced integer polynomials through O.

#![allow(dead_code)]

use std::sync::Arc;

use puiseux::numeric::Ctx;
use puiseux::poly::{squarefree_exact, ExactPoly, PuiseuxPoly};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Terms = Vec<(u32, u32, i64)>;

pub struct Sample {
    pub terms: Terms,
    pub exact: ExactPoly,
    pub poly: PuiseuxPoly,
}

fn monomials(max_deg: u32) -> Vec<(u32, u32)> {
    let mut v = Vec::new();
    for d in 1..=max_deg {
        for j in 0..=d {
            v.push((d - j, j));
        }
    }
    v
}

/// A sparse polynomial with f(O) = 0 and nonzero integer coefficients in
/// [-3, 3]; with `singular` it has no linear part.
pub fn random_terms(rng: &mut ChaCha8Rng, max_deg: u32, singular: bool) -> Terms {
    let pool: Vec<(u32, u32)> = monomials(max_deg)
        .into_iter()
        .filter(|(i, j)| !singular || i + j >= 2)
        .collect();
    let n = rng.gen_range(2..=5);
    let mut picked: Vec<(u32, u32)> = pool.choose_multiple(rng, n).copied().collect();
    // keep the curve from containing the line x = 0 twice
    if !picked.iter().any(|(i, _)| *i == 0) {
        let pure: Vec<_> = pool.iter().filter(|(i, _)| *i == 0).copied().collect();
        picked.push(*pure.choose(rng).unwrap());
    }
    picked
        .into_iter()
        .map(|(i, j)| {
            let mut a = rng.gen_range(1..=3);
            if rng.gen_bool(0.5) {
                a = -a;
            }
            (i, j, a)
        })
        .collect()
}

fn mul(a: &Terms, b: &Terms) -> Terms {
    let e = ExactPoly::from_int_terms(a).mul(&ExactPoly::from_int_terms(b));
    to_terms(&e)
}

fn to_terms(e: &ExactPoly) -> Terms {
    e.terms()
        .map(|(&(i, j), c)| {
            assert!(c.is_integer());
            (i, j, i64::try_from(c.to_integer()).unwrap())
        })
        .collect()
}

pub fn is_admissible(e: &ExactPoly) -> bool {
    !e.is_zero()
        && e.as_constant().is_none()
        && squarefree_exact(e)
        && e.x_valuation() <= 1
        && e.terms().all(|(&(i, j), _)| i + j > 0)
}

fn sample(ctx: &Arc<Ctx>, terms: Terms) -> Sample {
    let exact = ExactPoly::from_int_terms(&terms);
    let poly = exact.to_numeric(ctx);
    Sample { terms, exact, poly }
}

/// `n` reduced polynomials of degree at most 6: sparse random ones and
/// products of two or three random factors through O.
pub fn corpus(ctx: &Arc<Ctx>, seed: u64, n: usize) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let terms = match rng.gen_range(0..3) {
            0 => random_terms(&mut rng, 6, false),
            1 => random_terms(&mut rng, 6, true),
            _ => {
                let k = rng.gen_range(2..=3);
                let mut t = random_terms(&mut rng, 2, false);
                for _ in 1..k {
                    t = mul(&t, &random_terms(&mut rng, 2, false));
                }
                t
            }
        };
        let e = ExactPoly::from_int_terms(&terms);
        if e.total_degree() <= 6 && is_admissible(&e) {
            out.push(sample(ctx, to_terms(&e)));
        }
    }
    out
}

/// `n` pairs (g, h) of reduced factors through O whose product is reduced.
pub fn coprime_pairs(ctx: &Arc<Ctx>, seed: u64, n: usize) -> Vec<(Sample, Sample, Sample)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let (sg, sh) = (rng.gen_bool(0.5), rng.gen_bool(0.5));
        let g = random_terms(&mut rng, 3, sg);
        let h = random_terms(&mut rng, 3, sh);
        let (eg, eh) = (ExactPoly::from_int_terms(&g), ExactPoly::from_int_terms(&h));
        let prod = eg.mul(&eh);
        if is_admissible(&eg) && is_admissible(&eh) && is_admissible(&prod) {
            out.push((
                sample(ctx, to_terms(&eg)),
                sample(ctx, to_terms(&eh)),
                sample(ctx, to_terms(&prod)),
            ));
        }
    }
    out
}
