use num_integer::Integer;
use rand::Rng;

use crate::error::Result;
use crate::ext::{Embedding, ExtensionDesc};
use crate::field::{make_field, Fe, FiniteField};
use crate::gram::{RationalExtension, ScharlauFunctional};
use crate::gw::{GwElement, GwField};
use crate::kmw::{KmwClass, KmwFq, Term};
use crate::poly::Poly;
use crate::sample::{self, SampleRng};
use crate::transfers::{transition_unit, Tower, TransferMode, Transferer};

use super::algebra::{ext_expr, fq_expr};
use super::{fits, prime_degrees, Config, Ctx, Failure};

fn mode_name(m: TransferMode) -> &'static str {
    match m {
        TransferMode::Bt => "bt",
        TransferMode::Geo => "geo",
    }
}

fn extend(base: &FiniteField, d: u32) -> Result<FiniteField> {
    make_field(base.p() as u64, base.degree() * d)
}

/// A generator of `top` over `base` other than `top.gen()`.
fn other_generator(rng: &mut SampleRng, base: &FiniteField, top: &FiniteField) -> Result<Fe> {
    loop {
        let y = sample::unit(rng, top);
        if y != top.gen() && ExtensionDesc::from_generator(base, top, y).is_ok() {
            return Ok(y);
        }
    }
}

/// Checks `lhs == rhs`, recording `case` on a mismatch or an error.
fn compare(ctx: &mut Ctx, case: impl FnOnce() -> String, lhs: Result<KmwFq>, rhs: Result<KmwFq>) -> Result<()> {
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => {
            let ok = l.equals(&r)?;
            ctx.check(ok, || Failure { case: case(), expected: r.canonical().serialize(), got: l.canonical().serialize() });
        }
        (Err(e), Ok(r)) => ctx.error(case(), r.canonical().serialize(), e),
        (_, Err(e)) => ctx.error(case(), "a value".into(), e),
    }
    Ok(())
}

pub(super) fn projection(cfg: &Config, ctx: &mut Ctx) -> Result<()> {
    for &q in &cfg.qs {
        let base = cfg.field(q)?;
        let mut rng = cfg.rng(q);
        for d in 2..=cfg.max_degree {
            if !fits(q, d) {
                continue;
            }
            let top = extend(&base, d)?;
            let e = ExtensionDesc::from_generator(&base, &top, top.gen())?;
            let mut tr = Transferer::new();
            for _ in 0..cfg.samples {
                let (na, nb) = (rng.gen_range(-1..=1), rng.gen_range(-1..=1));
                let alpha = sample::kmw_fq(&mut rng, &base, na);
                let beta = sample::kmw_fq(&mut rng, &top, nb);
                let product = alpha.restrict(e.embedding())?.mul(&beta)?;
                for &mode in &cfg.modes {
                    ctx.case();
                    let lhs = tr.transfer(&e, &product, mode);
                    let rhs = tr.transfer(&e, &beta, mode).and_then(|t| alpha.mul(&t));
                    let case = || {
                        format!("transfer({}, {}, res({}, {top}) * ({}))", mode_name(mode), ext_expr(&e), fq_expr(&alpha), beta.serialize())
                    };
                    compare(ctx, case, lhs, rhs)?;
                }
            }
        }
    }
    Ok(())
}

fn gw_of(x: &KmwFq) -> Result<GwElement> {
    match x.class() {
        KmwClass::Gw(g) => Ok(g),
        other => Err(crate::Error::Semantic(format!("expected a degree-0 class, got {other:?}"))),
    }
}

/// Rational test extensions: a name for the minimal polynomial and its
/// coefficients, low to high.
const RATIONAL_CASES: [(&str, [i64; 4]); 3] = [("t^3-2", [-2, 0, 0, 1]), ("t^2-2", [-2, 0, 1, 0]), ("t^2+1", [1, 0, 1, 0])];

pub(super) fn lam_formulas(cfg: &Config, ctx: &mut Ctx) -> Result<()> {
    for &q in &cfg.qs {
        let base = cfg.field(q)?;
        let gf = GwField::Finite(base.clone());
        for d in 2..=cfg.max_degree {
            if !fits(q, d) {
                continue;
            }
            for f in Poly::monic_irreducibles(&base, d as usize).take(cfg.samples as usize) {
                let e = ExtensionDesc::from_min_poly(&base, &f)?;
                let top = e.top();
                let (input, expected) = if d % 2 == 1 {
                    (KmwFq::integer(top, 1), GwElement::n_epsilon(&gf, d as u64))
                } else {
                    let minus_norm = base.neg(e.norm(e.generator()));
                    let lam = GwElement::n_epsilon(&gf, d as u64 - 1).add(&GwElement::angle(&base, minus_norm)?)?;
                    (KmwFq::angle(top, e.generator())?, lam)
                };
                let mut tr = Transferer::new();
                for &mode in &cfg.modes {
                    ctx.case();
                    let got = tr.transfer(&e, &input, mode).and_then(|t| gw_of(&t));
                    let case = || format!("transfer({}, {}, {})", mode_name(mode), ext_expr(&e), input.serialize());
                    match got {
                        Ok(g) => ctx.check(g.equals(&expected)?, || Failure { case: case(), expected: expected.serialize(), got: g.serialize() }),
                        Err(err) => ctx.error(case(), expected.serialize(), err),
                    }
                }
            }
        }
    }
    for (name, coeffs) in RATIONAL_CASES {
        let len = if coeffs[3] == 0 { 3 } else { 4 };
        let ext = RationalExtension::from_ints(&coeffs[..len])?;
        let d = ext.degree();
        let (input, expected) = if d % 2 == 1 {
            (ext.one(), GwElement::n_epsilon(&GwField::Rationals, d as u64))
        } else {
            let n = ext.norm(&ext.generator());
            let lam = GwElement::n_epsilon(&GwField::Rationals, d as u64 - 1).add(&GwElement::from_rational_diagonal(&[-n])?)?;
            (ext.generator(), lam)
        };
        for &mode in &cfg.modes {
            ctx.case();
            let got = match mode {
                TransferMode::Bt => ext.scharlau_transfer(std::slice::from_ref(&input), ScharlauFunctional::Coefficient(d - 1))?,
                TransferMode::Geo => ext.trace_form_transfer(std::slice::from_ref(&input))?,
            };
            let shown = if d % 2 == 1 { "1".to_string() } else { "gw<x>".to_string() };
            ctx.check(got.equals(&expected)?, || Failure {
                case: format!("transfer({}, Q by {name}, {shown})", mode_name(mode)),
                expected: expected.serialize(),
                got: got.serialize(),
            });
        }
    }
    Ok(())
}

fn twist(ext: &ExtensionDesc, beta: &KmwFq, mode: TransferMode) -> Result<KmwFq> {
    match mode {
        TransferMode::Bt => Ok(beta.clone()),
        TransferMode::Geo => beta.angle_mul(ext.derivative_at_generator()),
    }
}

/// Applies a field map given by where the entries go.
fn map_entries(beta: &KmwFq, target: &FiniteField, phi: impl Fn(Fe) -> Fe) -> Result<KmwFq> {
    let terms = beta
        .terms()
        .iter()
        .map(|t| Term { entries: t.entries.iter().map(|&a| phi(a)).collect(), ..t.clone() })
        .collect();
    KmwFq::from_terms(target, beta.degree(), terms)
}

pub(super) fn r1c_weak(cfg: &Config, ctx: &mut Ctx) -> Result<()> {
    for &q in &cfg.qs {
        let base = cfg.field(q)?;
        let mut rng = cfg.rng(q);
        for r in [2u32, 3] {
            let l = extend(&base, r)?;
            let up = Embedding::canonical(&base, &l)?;
            for d in 1..=cfg.max_degree {
                if !fits(q, d.lcm(&r)) {
                    continue;
                }
                for f in Poly::monic_irreducibles(&base, d as usize).take(2) {
                    let kx = ExtensionDesc::residue_field(&base, &f)?;
                    let above: Vec<(Poly, _)> = up
                        .apply_poly(&f)
                        .factor(&l)?
                        .factors
                        .into_iter()
                        .map(|(g, _)| ExtensionDesc::residue_field(&l, &g).map(|ky| (g, ky)))
                        .collect::<Result<_>>()?;
                    let mut tr = Transferer::new();
                    for i in 0..cfg.samples {
                        let beta = sample::kmw_fq(&mut rng, kx.top(), (i % 2) as i64);
                        for &mode in &cfg.modes {
                            ctx.case();
                            let lhs = tr.at_point(&base, &f, &twist(&kx, &beta, mode)?).and_then(|t| t.restrict(&up));
                            let mut rhs = KmwFq::zero(&l, beta.degree());
                            for (g, ky) in &above {
                                let image = map_entries(&beta, ky.top(), |a| ky.eval(&up.apply_poly(&kx.as_poly(a))))?;
                                rhs = rhs.add(&tr.at_point(&l, g, &twist(ky, &image, mode)?)?)?;
                            }
                            let case = || format!("res(transfer({}, {}, {}), {l})", mode_name(mode), ext_expr(&kx), beta.serialize());
                            compare(ctx, case, lhs, Ok(rhs))?;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Divisor chains `1 < k_1 < ... < d` with each term dividing the next.
fn chains(cur: u32, d: u32) -> Vec<Vec<u32>> {
    if cur == d {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for k in (cur + 1..=d).filter(|k| k % cur == 0 && d.is_multiple_of(*k)) {
        for mut rest in chains(k, d) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

/// Towers from `base` to its degree-`d` extension along every divisor chain,
/// first with canonical generators, then (when `alternates`) with random ones.
fn towers(rng: &mut SampleRng, base: &FiniteField, d: u32, alternates: bool) -> Result<Vec<Tower>> {
    let mut out = Vec::new();
    for chain in chains(1, d) {
        let fields: Vec<FiniteField> = chain.iter().map(|&k| extend(base, k)).collect::<Result<_>>()?;
        let canonical: Vec<(FiniteField, Fe)> = fields.iter().map(|f| (f.clone(), f.gen())).collect();
        out.push(Tower::from_generators(base, &canonical)?);
        if alternates {
            let mut below = base.clone();
            let mut steps = Vec::new();
            for f in &fields {
                steps.push((f.clone(), other_generator(rng, &below, f)?));
                below = f.clone();
            }
            out.push(Tower::from_generators(base, &steps)?);
        }
    }
    Ok(out)
}

pub(super) fn r1c_strong(cfg: &Config, ctx: &mut Ctx) -> Result<()> {
    const PAIRS: [(u32, u32); 4] = [(2, 2), (2, 3), (3, 3), (4, 2)];
    for &q in &cfg.qs {
        let base = cfg.field(q)?;
        let mut rng = cfg.rng(q);
        for (d, r) in PAIRS.into_iter().filter(|&(d, r)| d <= cfg.max_degree && fits(q, d.lcm(&r))) {
            let top = extend(&base, d)?;
            let l = extend(&base, r)?;
            let comp = extend(&base, d.lcm(&r))?;
            let up = Embedding::canonical(&base, &l)?;
            // Embeddings top -> comp up to Gal(comp/l): roots of the modulus of
            // `top`, one per Frobenius orbit.
            let modulus = Poly::new(top.modulus().iter().map(|&c| Fe(c)).collect());
            let mut reps: Vec<Fe> = Vec::new();
            for rho in modulus.roots(&comp) {
                let mut orbit = vec![rho];
                let mut cur = comp.pow(rho, l.order() as u64);
                while cur != rho {
                    orbit.push(cur);
                    cur = comp.pow(cur, l.order() as u64);
                }
                if orbit.iter().all(|&s| s >= rho) {
                    reps.push(rho);
                }
            }
            let comp_tower = if comp == l {
                Tower::new(&l, vec![])?
            } else {
                Tower::from_generators(&l, &[(comp.clone(), comp.gen())])?
            };
            let mut tr = Transferer::new();
            for tower in towers(&mut rng, &base, d, false)? {
                for i in 0..cfg.samples {
                    let beta = sample::kmw_fq(&mut rng, &top, (i % 2) as i64);
                    for &mode in &cfg.modes {
                        ctx.case();
                        let lhs = tr.tower(&tower, &beta, mode).and_then(|t| t.restrict(&up));
                        let mut rhs = KmwFq::zero(&l, beta.degree());
                        for &rho in &reps {
                            let powers: Vec<Fe> = (0..top.degree()).map(|j| comp.pow(rho, j as u64)).collect();
                            let psi = |a: Fe| {
                                top.digits(a).iter().zip(&powers).fold(Fe::ZERO, |acc, (&c, &g)| comp.add(acc, comp.mul(Fe(c), g)))
                            };
                            rhs = rhs.add(&tr.tower(&comp_tower, &map_entries(&beta, &comp, psi)?, mode)?)?;
                        }
                        let case = || format!("res(transfer({}, {}, {}), {l})", mode_name(mode), tower.describe(), beta.serialize());
                        compare(ctx, case, lhs, Ok(rhs))?;
                    }
                }
            }
        }
    }
    Ok(())
}

/// Transfers `beta` along every tower and compares with the first. Raw
/// transfers are compared after the twist by the transition unit.
fn compare_towers(ctx: &mut Ctx, tr: &mut Transferer, towers: &[Tower], beta: &KmwFq, mode: TransferMode) -> Result<()> {
    let reference = &towers[0];
    let want = tr.tower(reference, beta, mode)?;
    for t in &towers[1..] {
        ctx.case();
        let input = match mode {
            TransferMode::Geo => beta.clone(),
            TransferMode::Bt => beta.angle_mul(transition_unit(reference, t)?)?,
        };
        let got = tr.tower(t, &input, mode);
        let case = || format!("transfer({}, {}, {})", mode_name(mode), t.describe(), input.serialize());
        compare(ctx, case, got, Ok(want.clone()))?;
    }
    Ok(())
}

pub(super) fn prime_degree_independence(cfg: &Config, ctx: &mut Ctx) -> Result<()> {
    for &q in &cfg.qs {
        let base = cfg.field(q)?;
        let mut rng = cfg.rng(q);
        for d in prime_degrees(cfg.max_degree).filter(|&d| fits(q, d)) {
            let top = extend(&base, d)?;
            let mut gens = vec![top.gen()];
            while gens.len() < 4 {
                let y = other_generator(&mut rng, &base, &top)?;
                if !gens.contains(&y) {
                    gens.push(y);
                }
            }
            let towers: Vec<Tower> = gens.iter().map(|&y| Tower::from_generators(&base, &[(top.clone(), y)])).collect::<Result<_>>()?;
            let mut tr = Transferer::new();
            for i in 0..cfg.samples {
                let beta = sample::kmw_fq(&mut rng, &top, (i % 2) as i64);
                for &mode in &cfg.modes {
                    compare_towers(ctx, &mut tr, &towers, &beta, mode)?;
                }
            }
        }
    }
    Ok(())
}

pub(super) fn composite_square(cfg: &Config, ctx: &mut Ctx) -> Result<()> {
    for &q in &cfg.qs {
        let e = cfg.field(q)?;
        let mut rng = cfg.rng(q);
        for p in [2u32, 3] {
            for m in 2..=4u32 {
                let top_degree = p.lcm(&m);
                if top_degree > cfg.max_degree || !fits(q, top_degree) {
                    continue;
                }
                let l = extend(&e, p)?;
                let ea = extend(&e, m)?;
                let big = extend(&e, top_degree)?;
                let a = ea.gen();
                let a_big = Embedding::canonical(&ea, &big)?.apply(a);
                // Tr_{L/E} o Tr_{a/L} against Tr_{a/E} o Tr_{L(a)/E(a)}.
                let via_l = Tower::new(
                    &e,
                    vec![ExtensionDesc::from_generator(&e, &l, l.gen())?, ExtensionDesc::from_generator(&l, &big, a_big)?],
                )?;
                let via_a = Tower::new(
                    &e,
                    vec![ExtensionDesc::from_generator(&e, &ea, a)?, ExtensionDesc::from_generator(&ea, &big, big.gen())?],
                )?;
                let mut tr = Transferer::new();
                for i in 0..cfg.samples {
                    let alpha = sample::kmw_fq(&mut rng, &big, (i % 2) as i64);
                    for &mode in &cfg.modes {
                        ctx.case();
                        let lhs = tr.tower(&via_l, &alpha, mode);
                        let rhs = tr.tower(&via_a, &alpha, mode);
                        let case = || format!("transfer({}, {}, {})", mode_name(mode), via_l.describe(), alpha.serialize());
                        compare(ctx, case, lhs, rhs)?;
                    }
                }
            }
        }
    }
    Ok(())
}

pub(super) fn kato_morel(cfg: &Config, ctx: &mut Ctx) -> Result<()> {
    for &q in &cfg.qs {
        let base = cfg.field(q)?;
        let mut rng = cfg.rng(q);
        for d in [2u32, 3, 4, 6].into_iter().filter(|&d| d <= cfg.max_degree && fits(q, d)) {
            let towers = towers(&mut rng, &base, d, true)?;
            let top = towers[0].top().clone();
            let mut tr = Transferer::new();
            for n in [0i64, 1] {
                for _ in 0..cfg.samples {
                    let beta = sample::kmw_fq(&mut rng, &top, n);
                    for &mode in &cfg.modes {
                        compare_towers(ctx, &mut tr, &towers, &beta, mode)?;
                    }
                }
            }
        }
    }
    Ok(())
}

