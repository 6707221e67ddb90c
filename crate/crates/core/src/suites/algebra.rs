use rand::Rng;

use crate::error::Result;
use crate::ext::{Embedding, ExtensionDesc};
use crate::field::{make_field, Fe, FiniteField};
use crate::gw::{GwElement, GwField};
use crate::kmw::{ClosedPoint, KmwClass, KmwFq, KmwFt, RatFn, Term};
use crate::poly::Poly;
use crate::sample::{self, SampleRng};
use crate::transfers::{bt_decompose, characterization_defect, recompose, transfer_bt, transfer_geo};

use super::{fits, prime_degrees, Config, Ctx, Failure};

pub(super) fn fq_expr(b: &KmwFq) -> String {
    format!("{} over {}", b.serialize(), b.field())
}

pub(super) fn ft_expr(g: &KmwFt) -> String {
    format!("{} over {}(t)", g.serialize(), g.field())
}

pub(super) fn ext_expr(e: &ExtensionDesc) -> String {
    format!("{}/{} by {} at {}", e.top(), e.base(), e.min_poly().format(e.base(), "t"), e.top().format(e.generator()))
}

fn non_constant_ratfn(rng: &mut SampleRng, f: &FiniteField) -> (RatFn, RatFn) {
    loop {
        let g = sample::ratfn(rng, f, 2);
        if g.is_constant() {
            continue;
        }
        if let Some(h) = g.one_minus(f) {
            return (g, h);
        }
    }
}

/// A sum of terms that vanish in `K^MW_n(E(t))` for formal reasons: Steinberg
/// symbols `[g, 1-g]` and `eta [g^2] = eta h [g] = 0`.
fn vanishing_noise(rng: &mut SampleRng, f: &FiniteField, n: i64) -> Result<KmwFt> {
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let (g, one_minus_g) = non_constant_ratfn(rng, f);
        let coeff = rng.gen_range(1..=2) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let (eta, tail) = if rng.gen_bool(0.5) {
            ((2 - n).max(0) as u32, vec![g, one_minus_g])
        } else {
            ((1 - n).max(1) as u32, vec![g.mul(&g, f)])
        };
        let extra = (n + eta as i64) as usize - tail.len();
        let mut entries: Vec<RatFn> = (0..extra).map(|_| sample::ratfn(rng, f, 1)).collect();
        entries.extend(tail);
        terms.push(Term { coeff, eta, entries });
    }
    KmwFt::from_terms(f, n, terms)
}

/// Points at which specialization is compared: all rational points, infinity,
/// and one point of degree 2.
fn test_points(f: &FiniteField) -> Vec<ClosedPoint> {
    let mut pts: Vec<ClosedPoint> = f.elements().map(|a| ClosedPoint::rational(f, a)).collect();
    pts.push(ClosedPoint::Infinity);
    let quad = Poly::monic_irreducibles(f, 2).next().expect("quadratic irreducible");
    pts.push(ClosedPoint::Finite(quad));
    pts
}

fn check_constant(ctx: &mut Ctx, gamma: &KmwFt, alpha: &KmwFq, pts: &[ClosedPoint]) -> Result<()> {
    let f = gamma.field();
    let mut places = gamma.support();
    places.push(ClosedPoint::Infinity);
    for x in &places {
        let r = gamma.residue(x)?;
        ctx.check(r.is_zero(), || Failure {
            case: format!("residue({}, {})", x.format(f), ft_expr(gamma)),
            expected: "0".into(),
            got: r.serialize(),
        });
    }
    for x in pts {
        let ext = x.residue_ext(f)?;
        let want = alpha.restrict(ext.embedding())?;
        let case = format!("specialize({}, {})", x.format(f), ft_expr(gamma));
        match gamma.specialize(x) {
            Ok(got) => {
                let ok = got.equals(&want)?;
                ctx.check(ok, || Failure { case, expected: want.serialize(), got: got.serialize() });
            }
            Err(e) => ctx.error(case, want.serialize(), e),
        }
    }
    Ok(())
}

pub(super) fn homotopy_ses(cfg: &Config, ctx: &mut Ctx) -> Result<()> {
    for &q in &cfg.qs {
        let f = cfg.field(q)?;
        let mut rng = cfg.rng(q);
        let pts = test_points(&f);
        for i in 0..cfg.samples {
            let n = (i % 3) as i64;
            let alpha = sample::kmw_fq(&mut rng, &f, n);
            ctx.case();
            let constant = KmwFt::from_constant(&alpha);
            check_constant(ctx, &constant, &alpha, &pts)?;
            ctx.case();
            let disguised = constant.add(&vanishing_noise(&mut rng, &f, n)?)?;
            check_constant(ctx, &disguised, &alpha, &pts)?;
        }
    }
    Ok(())
}

pub(super) fn characterization(cfg: &Config, ctx: &mut Ctx) -> Result<()> {
    for &q in &cfg.qs {
        let f = cfg.field(q)?;
        let mut rng = cfg.rng(q);
        for n in [1i64, 2] {
            for _ in 0..cfg.samples {
                let gamma = sample::kmw_ft(&mut rng, &f, n, cfg.max_degree as usize);
                ctx.case();
                let case = format!("defect({})", ft_expr(&gamma));
                match characterization_defect(&gamma) {
                    Ok(d) => ctx.check(d.is_zero(), || Failure { case, expected: "0".into(), got: d.serialize() }),
                    Err(e) => ctx.error(case, "0".into(), e),
                }
            }
        }
    }
    Ok(())
}

/// The canonical generator of `F_{q^d}` over `F_q` and one other generator.
fn generators(rng: &mut SampleRng, base: &FiniteField, top: &FiniteField) -> Result<Vec<ExtensionDesc>> {
    let mut out = vec![ExtensionDesc::from_generator(base, top, top.gen())?];
    if top.degree() == base.degree() {
        return Ok(out);
    }
    loop {
        let y = sample::unit(rng, top);
        if y == top.gen() {
            continue;
        }
        if let Ok(e) = ExtensionDesc::from_generator(base, top, y) {
            out.push(e);
            return Ok(out);
        }
    }
}

fn decomposition_cases(cfg: &Config, ctx: &mut Ctx, degrees: &[u32], linear_only: bool) -> Result<()> {
    for &q in &cfg.qs {
        let base = cfg.field(q)?;
        let mut rng = cfg.rng(q);
        for &d in degrees {
            if !fits(q, d) {
                continue;
            }
            let top = make_field(base.p() as u64, base.degree() * d)?;
            let exts = generators(&mut rng, &base, &top)?;
            for i in 0..cfg.samples {
                let e = &exts[i as usize % exts.len()];
                let n = (i % 4) as i64 - 1;
                let beta = sample::kmw_fq(&mut rng, &top, n);
                ctx.case();
                let case = format!("decompose({}, {})", ext_expr(e), beta.serialize());
                let parts = match bt_decompose(e, &beta) {
                    Ok(p) => p,
                    Err(err) => {
                        ctx.error(case, beta.serialize(), err);
                        continue;
                    }
                };
                let back = recompose(e, &parts, n)?;
                ctx.check(back.equals(&beta)?, || Failure { case: case.clone(), expected: beta.serialize(), got: back.serialize() });
                let shaped = parts.iter().all(|t| {
                    t.polys.windows(2).all(|w| w[0].deg() < w[1].deg())
                        && t.polys.iter().all(|p| p.deg() < d as usize && (!linear_only || p.deg() == 1))
                });
                let want = if linear_only { "linear entries only" } else { "strictly increasing degrees below d" };
                ctx.check(shaped, || Failure { case, expected: want.into(), got: format!("{} terms violate the shape", parts.len()) });
            }
        }
    }
    Ok(())
}

pub(super) fn generation(cfg: &Config, ctx: &mut Ctx) -> Result<()> {
    let degrees: Vec<u32> = (2..=cfg.max_degree).collect();
    decomposition_cases(cfg, ctx, &degrees, false)
}

pub(super) fn prime_generation(cfg: &Config, ctx: &mut Ctx) -> Result<()> {
    let degrees: Vec<u32> = prime_degrees(cfg.max_degree).collect();
    decomposition_cases(cfg, ctx, &degrees, true)
}

fn gw_of(x: &KmwFq) -> Option<GwElement> {
    match x.class() {
        KmwClass::Gw(g) => Some(g),
        _ => None,
    }
}

pub(super) fn nilpotence(cfg: &Config, ctx: &mut Ctx) -> Result<()> {
    for &q in &cfg.qs {
        let f = cfg.field(q)?;
        let gf = GwField::Finite(f.clone());
        let one = GwElement::one(&gf);
        for u in f.units() {
            ctx.case();
            let alpha = GwElement::angle(&f, u)?.sub(&one)?;
            let case = format!("gw<{}> - gw<1> over {f}", f.format(u));
            let cube = alpha.pow(3);
            ctx.check(cube.is_zero(), || Failure { case: format!("({case})^3"), expected: "0".into(), got: cube.serialize() });
            for n in 1..=5u32 {
                let lhs = alpha.pow(n);
                let rhs = alpha.scale((-2i64).pow(n - 1));
                ctx.check(lhs.equals(&rhs)?, || Failure {
                    case: format!("({case})^{n}"),
                    expected: rhs.serialize(),
                    got: lhs.serialize(),
                });
            }
            let exp = alpha.nilpotent_exponent(3);
            ctx.check(exp.is_ok(), || Failure { case, expected: "nilpotent of exponent <= 3".into(), got: format!("{exp:?}") });
        }
        // Tr(1) - [F:E] is nilpotent for both transfers.
        for d in 2..=cfg.max_degree {
            if !fits(q, d) {
                continue;
            }
            let top = make_field(f.p() as u64, f.degree() * d)?;
            let e = ExtensionDesc::from_generator(&f, &top, top.gen())?;
            let one_top = KmwFq::integer(&top, 1);
            for (name, t) in [("bt", transfer_bt(&e, &one_top)?), ("geo", transfer_geo(&e, &one_top)?)] {
                ctx.case();
                let case = format!("transfer({name}, {}, 1) - {d}", ext_expr(&e));
                let Some(g) = gw_of(&t) else {
                    ctx.check(false, || Failure { case, expected: "a GW class".into(), got: t.serialize() });
                    continue;
                };
                let alpha = g.sub(&one.scale(d as i64))?;
                let exp = alpha.nilpotent_exponent(3);
                ctx.check(exp.is_ok(), || Failure { case, expected: "nilpotent of exponent <= 3".into(), got: alpha.serialize() });
            }
        }
    }
    Ok(())
}

/// Every element of `K^MW_n(F_q)` for `n = 1, -1`, and the elements
/// `r + e(<c> - 1)`, `|r| <= 6`, of `GW(F_q)`.
fn enumerate(f: &FiniteField, n: i64) -> Result<Vec<KmwFq>> {
    let gf = GwField::Finite(f.clone());
    let one = GwElement::one(&gf);
    let twist = GwElement::angle(f, f.nonsquare())?.sub(&one)?;
    match n {
        1 => f.units().map(|u| KmwFq::symbol(f, 0, &[u])).collect(),
        0 => {
            let mut out = Vec::new();
            for r in -6..=6 {
                for e in 0..2 {
                    out.push(KmwFq::from_gw(&one.scale(r).add(&twist.scale(e))?)?);
                }
            }
            Ok(out)
        }
        _ => {
            let mut out = Vec::new();
            for a in 0..4 {
                for b in 0..2 {
                    let g = one.scale(a).add(&GwElement::angle(f, f.nonsquare())?.scale(b))?;
                    out.push(KmwFq::from_gw(&g)?.eta_mul());
                }
            }
            Ok(out)
        }
    }
}

pub(super) fn coprime_kill(cfg: &Config, ctx: &mut Ctx) -> Result<()> {
    for &q in &cfg.qs {
        let f = cfg.field(q)?;
        let up2 = Embedding::canonical(&f, &make_field(f.p() as u64, f.degree() * 2)?)?;
        let up3 = Embedding::canonical(&f, &make_field(f.p() as u64, f.degree() * 3)?)?;
        for n in [-1i64, 0, 1] {
            for delta in enumerate(&f, n)? {
                ctx.case();
                let killed = delta.restrict(&up2)?.is_zero() && delta.restrict(&up3)?.is_zero();
                ctx.check(!killed || delta.is_zero(), || Failure {
                    case: fq_expr(&delta),
                    expected: "nonzero restriction to GF(q^2) or GF(q^3)".into(),
                    got: "both restrictions vanish".into(),
                });
            }
        }
    }
    Ok(())
}

pub(super) fn r3a(cfg: &Config, ctx: &mut Ctx) -> Result<()> {
    for &q in &cfg.qs {
        let f = cfg.field(q)?;
        let mut rng = cfg.rng(q);
        let origin = ClosedPoint::rational(&f, Fe::ZERO);
        let gf = GwField::Finite(f.clone());
        for e in (2..=cfg.max_degree).filter(|e| e % f.p() != 0) {
            let substitution = Poly::t().pow(e, &f);
            let e_eps = KmwFq::from_gw(&GwElement::n_epsilon(&gf, e as u64))?;
            for i in 0..cfg.samples {
                let n = 1 + (i % 2) as i64;
                let alpha = sample::kmw_ft(&mut rng, &f, n, 2);
                ctx.case();
                let lifted = alpha.compose(&substitution);
                let lhs = lifted.residue(&origin)?;
                let rhs = e_eps.mul(&alpha.residue(&origin)?)?;
                ctx.check(lhs.equals(&rhs)?, || Failure {
                    case: format!("residue(t, compose({}, {}))", ft_expr(&alpha), substitution.format(&f, "t")),
                    expected: rhs.serialize(),
                    got: lhs.serialize(),
                });
            }
        }
    }
    Ok(())
}
