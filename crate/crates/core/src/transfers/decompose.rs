use num_integer::Integer;

use crate::error::{Error, Result};
use crate::ext::ExtensionDesc;
use crate::field::{is_prime, Fe};
use crate::kmw::KmwFq;
use crate::poly::Poly;

/// `res(alpha) * eta^m [p_1(x), ..., p_n(x)]` with `deg p_1 < ... < deg p_n < d`.
#[derive(Clone, Debug)]
pub struct DecompTerm {
    pub alpha: KmwFq,
    pub eta: u32,
    pub polys: Vec<Poly>,
}

/// Writes `beta` over `E(x)` as a `K^MW(E)`-combination of symbols in
/// polynomials of degree `< d` in the generator.
///
/// Over a finite field `K^MW_2` vanishes and `[.]` is additive in degree 1,
/// so each symbol `[q(x)]` splits along the factorization of `q`. When `d` is
/// prime, irreducible factors of degree `>= 2` are further rewritten through
/// the subgroup of `F^x` generated by `E^x` and the `x - a`.
pub fn bt_decompose(ext: &ExtensionDesc, beta: &KmwFq) -> Result<Vec<DecompTerm>> {
    if beta.field() != ext.top() {
        return Err(Error::FieldMismatch(format!("{} vs {}", beta.field(), ext.top())));
    }
    let base = ext.base();
    let d = ext.degree();
    let linearize = d >= 3 && is_prime(d as u64);
    let mut out = Vec::new();
    for t in beta.canonical().terms() {
        let Some(&b) = t.entries.first() else {
            out.push(DecompTerm { alpha: KmwFq::integer(base, t.coeff), eta: t.eta, polys: vec![] });
            continue;
        };
        let fact = ext.as_poly(b).factor(base)?;
        let push_const = |c: Fe, mult: i64, out: &mut Vec<DecompTerm>| -> Result<()> {
            if c != Fe::ONE && mult != 0 {
                let alpha = KmwFq::symbol(base, 0, &[c])?.scale(mult);
                out.push(DecompTerm { alpha, eta: t.eta, polys: vec![] });
            }
            Ok(())
        };
        push_const(fact.lc, t.coeff, &mut out)?;
        for (p, e) in fact.factors {
            let mult = t.coeff * e as i64;
            if linearize && p.deg() >= 2 {
                let (c0, lin) = linear_expression(ext, ext.eval(&p))?;
                push_const(c0, mult, &mut out)?;
                for (a, n) in lin {
                    out.push(DecompTerm {
                        alpha: KmwFq::integer(base, mult * n),
                        eta: t.eta,
                        polys: vec![Poly::linear(base, a)],
                    });
                }
            } else {
                out.push(DecompTerm { alpha: KmwFq::integer(base, mult), eta: t.eta, polys: vec![p] });
            }
        }
    }
    Ok(out)
}

/// `sum res(alpha) eta^m [p_1(x), ...]` in `K^MW(E(x))`.
pub fn recompose(ext: &ExtensionDesc, terms: &[DecompTerm], degree: i64) -> Result<KmwFq> {
    let top = ext.top();
    let mut acc = KmwFq::zero(top, degree);
    for t in terms {
        let entries: Vec<Fe> = t.polys.iter().map(|p| ext.eval(p)).collect();
        let tail = KmwFq::symbol(top, t.eta, &entries)?;
        acc = acc.add(&t.alpha.restrict(ext.embedding())?.mul(&tail)?)?;
    }
    Ok(acc)
}

/// Finds `c0` in `E^x` and integers `n_a` with `b = c0 * prod (x - a)^{n_a}`.
fn linear_expression(ext: &ExtensionDesc, b: Fe) -> Result<(Fe, Vec<(Fe, i64)>)> {
    let base = ext.base();
    let top = ext.top();
    let n = top.order() as i128 - 1;
    let gens: Vec<Fe> = base.elements().collect();
    let mut logs: Vec<i128> = gens.iter().map(|&a| top.log(top.sub(ext.generator(), ext.embed(a))) as i128).collect();
    let base_gen = base.exp(1);
    logs.push(top.log(ext.embed(base_gen)) as i128);
    // Extended gcd of the logarithms together with the group order.
    let mut g: i128 = n;
    let mut coefs = vec![0i128; logs.len()];
    for (j, &l) in logs.iter().enumerate() {
        let e = g.extended_gcd(&l);
        let (s, t) = (e.x, e.y);
        for c in coefs.iter_mut() {
            *c = (*c * s).rem_euclid(n);
        }
        coefs[j] = (coefs[j] + t).rem_euclid(n);
        g = e.gcd;
    }
    let target = top.log(b) as i128;
    if target % g != 0 {
        return Err(Error::Unsupported(format!("{} is not generated by linear elements", top.format(b))));
    }
    let k = target / g;
    let sym = |c: i128| {
        let c = (c * k).rem_euclid(n);
        if c > n / 2 { c - n } else { c }
    };
    let c0 = base.exp(sym(coefs[logs.len() - 1]).rem_euclid(base.order() as i128 - 1) as u64);
    let lin = gens.iter().zip(&coefs).map(|(&a, &c)| (a, sym(c) as i64)).filter(|&(_, c)| c != 0).collect();
    Ok((c0, lin))
}
