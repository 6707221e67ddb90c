//! Seeded random generation of field elements, polynomials and K^MW elements.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Fe, FiniteField};
use crate::kmw::{KmwFq, KmwFt, RatFn, Term};
use crate::poly::Poly;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit(rng: &mut SampleRng, f: &FiniteField) -> Fe {
    Fe(rng.gen_range(1..f.order()))
}

fn coeff(rng: &mut SampleRng) -> i64 {
    *[-2i64, -1, 1, 1, 2].choose(rng).unwrap()
}

/// Eta power and entry count for a term of degree `n`, with `m <= 2`, `k <= 3`.
fn shape(rng: &mut SampleRng, n: i64) -> (u32, usize) {
    let choices: Vec<(u32, usize)> = (0..=2u32)
        .filter_map(|m| {
            let k = n + m as i64;
            (0..=3).contains(&k).then_some((m, k as usize))
        })
        .collect();
    if choices.is_empty() {
        // Very negative degrees: pure eta powers.
        return ((-n) as u32, 0);
    }
    *choices.choose(rng).unwrap()
}

pub fn kmw_fq(rng: &mut SampleRng, f: &FiniteField, n: i64) -> KmwFq {
    let count = rng.gen_range(1..=3);
    let terms = (0..count)
        .map(|_| {
            let (eta, k) = shape(rng, n);
            Term { coeff: coeff(rng), eta, entries: (0..k).map(|_| unit(rng, f)).collect() }
        })
        .collect();
    KmwFq::from_terms(f, n, terms).expect("homogeneous by construction")
}

pub fn poly(rng: &mut SampleRng, f: &FiniteField, max_deg: usize, monic: bool) -> Poly {
    loop {
        let d = rng.gen_range(0..=max_deg);
        let mut c: Vec<Fe> = (0..=d).map(|_| Fe(rng.gen_range(0..f.order()))).collect();
        if monic {
            c[d] = Fe::ONE;
        }
        let p = Poly::new(c);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn ratfn(rng: &mut SampleRng, f: &FiniteField, max_deg: usize) -> RatFn {
    let num = poly(rng, f, max_deg, false);
    let den = poly(rng, f, max_deg.min(1), true);
    RatFn::new(f, &num, &den).expect("nonzero")
}

pub fn kmw_ft(rng: &mut SampleRng, f: &FiniteField, n: i64, max_deg: usize) -> KmwFt {
    let count = rng.gen_range(1..=2);
    let terms = (0..count)
        .map(|_| {
            let (eta, k) = shape(rng, n);
            Term { coeff: coeff(rng), eta, entries: (0..k).map(|_| ratfn(rng, f, max_deg)).collect() }
        })
        .collect();
    KmwFt::from_terms(f, n, terms).expect("homogeneous by construction")
}
