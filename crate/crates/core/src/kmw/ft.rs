//! `K^MW` of the rational function field `F_q(t)`: residues at closed points,
//! specialisation and the zero test coming from homotopy invariance.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ext::ExtensionDesc;
use crate::field::{Fe, FiniteField};
use crate::poly::Poly;

use super::{collect_terms, format_terms, mul_terms, KmwFq, RatFn, Term};

/// A place of `F_q(t)` trivial on `F_q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ClosedPoint {
    /// The zero locus of a monic irreducible polynomial, with uniformizer that polynomial.
    Finite(Poly),
    /// The point at infinity, with uniformizer `-1/t`.
    Infinity,
}

impl ClosedPoint {
    pub fn finite(f: &FiniteField, p: Poly) -> Result<Self> {
        if !p.is_monic() || !p.is_irreducible(f) {
            return Err(Error::Reducible(p.format(f, "t")));
        }
        Ok(ClosedPoint::Finite(p))
    }

    /// The rational point `t = a`.
    pub fn rational(f: &FiniteField, a: Fe) -> Self {
        ClosedPoint::Finite(Poly::linear(f, a))
    }

    pub fn degree(&self) -> usize {
        match self {
            ClosedPoint::Finite(p) => p.deg(),
            ClosedPoint::Infinity => 1,
        }
    }

    /// `kappa(x)` as an extension of the constant field.
    pub fn residue_ext(&self, f: &FiniteField) -> Result<Arc<ExtensionDesc>> {
        match self {
            ClosedPoint::Finite(p) => ExtensionDesc::residue_field(f, p),
            ClosedPoint::Infinity => Ok(Arc::new(ExtensionDesc::trivial(f))),
        }
    }

    /// The canonical uniformizer as a rational function.
    pub fn uniformizer(&self, f: &FiniteField) -> RatFn {
        match self {
            ClosedPoint::Finite(p) => RatFn::from_poly(f, p).unwrap(),
            ClosedPoint::Infinity => RatFn::t().inv(f).neg(f),
        }
    }

    /// Writes `r = pi^a u` with `u` a unit at the point; returns `(a, u mod pi)`.
    fn split(&self, r: &RatFn, f: &FiniteField, ext: &ExtensionDesc) -> (i64, Fe) {
        match self {
            ClosedPoint::Finite(p) => {
                let (vn, cn) = r.num().valuation(p, f);
                let (vd, cd) = r.den().valuation(p, f);
                let top = ext.top();
                let u = top.div(ext.eval(&cn), ext.eval(&cd));
                (vn as i64 - vd as i64, top.mul(ext.embed(r.lc()), u))
            }
            ClosedPoint::Infinity => {
                let a = r.valuation_at_infinity();
                let sign = if a % 2 == 0 { Fe::ONE } else { f.neg(Fe::ONE) };
                (a, f.mul(r.lc(), sign))
            }
        }
    }

    pub fn format(&self, f: &FiniteField) -> String {
        match self {
            ClosedPoint::Finite(p) => p.format(f, "t"),
            ClosedPoint::Infinity => "inf".into(),
        }
    }
}

/// `a + b<-1>` in `Z[C_2]`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Zc2(i64, i64);

impl Zc2 {
    const EPS: Zc2 = Zc2(0, -1);
    fn mul(self, o: Zc2) -> Zc2 {
        Zc2(self.0 * o.0 + self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn pow(self, n: usize) -> Zc2 {
        (0..n).fold(Zc2(1, 0), |acc, _| acc.mul(self))
    }
    /// `[pi^a] = C_a [pi]`.
    fn valuation_coefficient(a: i64) -> Zc2 {
        let b = a.unsigned_abs() as i64;
        let eps_int = Zc2((b + 1) / 2, b / 2);
        if a >= 0 {
            eps_int
        } else {
            let sign = if b % 2 == 1 { Zc2(0, -1) } else { Zc2(-1, 0) };
            sign.mul(eps_int)
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Sym {
    Pi,
    Unit(Fe),
}

/// A homogeneous element of `K^MW_n(F_q(t))`.
#[derive(Clone, Debug)]
pub struct KmwFt {
    field: FiniteField,
    degree: i64,
    terms: Vec<Term<RatFn>>,
}

impl KmwFt {
    pub fn zero(field: &FiniteField, degree: i64) -> Self {
        KmwFt { field: field.clone(), degree, terms: Vec::new() }
    }

    pub fn symbol(field: &FiniteField, eta: u32, entries: &[RatFn]) -> Self {
        KmwFt {
            field: field.clone(),
            degree: entries.len() as i64 - eta as i64,
            terms: vec![Term { coeff: 1, eta, entries: entries.to_vec() }],
        }
    }

    pub fn from_terms(field: &FiniteField, degree: i64, terms: Vec<Term<RatFn>>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| t.degree() != degree) {
            return Err(Error::DegreeMismatch(degree, t.degree()));
        }
        Ok(KmwFt { field: field.clone(), degree, terms: collect_terms(terms) })
    }

    /// The image of a constant element under `F_q -> F_q(t)`.
    pub fn from_constant(a: &KmwFq) -> Self {
        let terms = a
            .terms()
            .iter()
            .map(|t| Term {
                coeff: t.coeff,
                eta: t.eta,
                entries: t.entries.iter().map(|&e| RatFn::constant(e).unwrap()).collect(),
            })
            .collect();
        KmwFt { field: a.field().clone(), degree: a.degree(), terms }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }
    pub fn degree(&self) -> i64 {
        self.degree
    }
    pub fn terms(&self) -> &[Term<RatFn>] {
        &self.terms
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(KmwFt { field: self.field.clone(), degree: self.degree, terms: collect_terms(terms) })
    }

    pub fn scale(&self, k: i64) -> Self {
        let terms = self.terms.iter().map(|t| Term { coeff: t.coeff * k, ..t.clone() }).collect();
        KmwFt { field: self.field.clone(), degree: self.degree, terms: collect_terms(terms) }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(KmwFt {
            field: self.field.clone(),
            degree: self.degree + other.degree,
            terms: collect_terms(mul_terms(&self.terms, &other.terms)),
        })
    }

    pub fn eta_mul(&self) -> Self {
        let terms = self.terms.iter().map(|t| Term { eta: t.eta + 1, ..t.clone() }).collect();
        KmwFt { field: self.field.clone(), degree: self.degree - 1, terms }
    }

    /// `[r] * self`.
    pub fn symbol_mul(&self, r: &RatFn) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut entries = vec![r.clone()];
                entries.extend(t.entries.iter().cloned());
                Term { entries, ..t.clone() }
            })
            .collect();
        KmwFt { field: self.field.clone(), degree: self.degree + 1, terms }
    }

    /// Substitutes `t -> g(t)` in every entry (restriction along `F_q(t) -> F_q(s)`, `t = g(s)`).
    pub fn compose(&self, g: &Poly) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term { entries: t.entries.iter().map(|e| e.compose(g, &self.field)).collect(), ..t.clone() })
            .collect();
        KmwFt { field: self.field.clone(), degree: self.degree, terms: collect_terms(terms) }
    }

    /// Finite closed points dividing some entry, sorted.
    pub fn support(&self) -> Vec<ClosedPoint> {
        let mut pts: Vec<Poly> = self
            .terms
            .iter()
            .flat_map(|t| t.entries.iter())
            .flat_map(|e| e.factors(&self.field).into_iter().map(|(p, _)| p))
            .collect();
        pts.sort();
        pts.dedup();
        pts.into_iter().map(ClosedPoint::Finite).collect()
    }

    /// The residue `d_x(self)` in `K^MW_{n-1}(kappa(x))` for the canonical uniformizer.
    pub fn residue(&self, x: &ClosedPoint) -> Result<KmwFq> {
        let f = &self.field;
        let ext = x.residue_ext(f)?;
        let kappa = ext.top();
        let minus_one = kappa.neg(Fe::ONE);
        let mut out: Vec<Term<Fe>> = Vec::new();
        for term in &self.terms {
            // Expand each entry as [u] + <u> C_a [pi] = [u] + C_a [pi] + C_a eta [u][pi].
            let mut words: Vec<(Zc2, u32, Vec<Sym>)> = vec![(Zc2(term.coeff, 0), term.eta, Vec::new())];
            for e in &term.entries {
                let (a, u) = x.split(e, f, &ext);
                let c = Zc2::valuation_coefficient(a);
                let mut next = Vec::with_capacity(words.len() * 3);
                for (k, eta, syms) in words {
                    if u != Fe::ONE {
                        let mut s = syms.clone();
                        s.push(Sym::Unit(u));
                        next.push((k, eta, s));
                    }
                    if a != 0 {
                        let mut s = syms.clone();
                        s.push(Sym::Pi);
                        next.push((k.mul(c), eta, s));
                        if u != Fe::ONE {
                            let mut s = syms;
                            s.push(Sym::Unit(u));
                            s.push(Sym::Pi);
                            next.push((k.mul(c), eta + 1, s));
                        }
                    }
                }
                words = next;
            }
            for (k, eta, syms) in words {
                let Some((k, units)) = move_pi_to_front(k, syms, minus_one) else { continue };
                out.push(Term { coeff: k.0, eta, entries: units.clone() });
                if k.1 != 0 {
                    out.push(Term { coeff: k.1, eta, entries: units.clone() });
                    let mut with_sign = vec![minus_one];
                    with_sign.extend(units);
                    out.push(Term { coeff: k.1, eta: eta + 1, entries: with_sign });
                }
            }
        }
        out.retain(|t| t.coeff != 0);
        KmwFq::from_terms(kappa, self.degree - 1, out)
    }

    pub fn is_unramified_at(&self, x: &ClosedPoint) -> Result<bool> {
        Ok(self.residue(x)?.is_zero())
    }

    /// `s_x(self) = d_x([pi] self)`, defined when `self` is unramified at `x`.
    pub fn specialize(&self, x: &ClosedPoint) -> Result<KmwFq> {
        if !self.is_unramified_at(x)? {
            return Err(Error::Ramified(x.format(&self.field)));
        }
        self.symbol_mul(&x.uniformizer(&self.field)).residue(x)
    }

    pub fn serialize(&self) -> String {
        format_terms(&self.terms, |e| e.format(&self.field))
    }
}

impl fmt::Display for KmwFt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

/// Rewrites `k * eta^m * w` so that the first `[pi]` is in front and no other
/// `[pi]` remains, using `[a][b] = eps [b][a]` and `[pi][pi] = [pi][-1]`.
/// Returns `None` for words without `[pi]`, whose residue vanishes.
fn move_pi_to_front(mut k: Zc2, syms: Vec<Sym>, minus_one: Fe) -> Option<(Zc2, Vec<Fe>)> {
    let first = syms.iter().position(|s| *s == Sym::Pi)?;
    k = k.mul(Zc2::EPS.pow(first));
    let mut rest: Vec<Sym> = syms;
    rest.remove(first);
    while let Some(j) = rest.iter().position(|s| *s == Sym::Pi) {
        k = k.mul(Zc2::EPS.pow(j));
        rest.remove(j);
        rest.insert(0, Sym::Unit(minus_one));
    }
    let units = rest
        .into_iter()
        .map(|s| match s {
            Sym::Unit(u) => u,
            Sym::Pi => unreachable!(),
        })
        .collect();
    Some((k, units))
}

/// Decides `gamma = gamma'` in `K^MW_n(F_q(t))`: the difference must have zero
/// residue at every finite point and zero specialisation at a rational point.
pub fn equal_ft(a: &KmwFt, b: &KmwFt) -> Result<bool> {
    let delta = a.sub(b)?;
    let f = delta.field().clone();
    let support = delta.support();
    for x in &support {
        if !delta.is_unramified_at(x)? {
            return Ok(false);
        }
    }
    let point = f
        .elements()
        .map(|c| ClosedPoint::rational(&f, c))
        .find(|x| !support.contains(x))
        .unwrap_or_else(|| ClosedPoint::rational(&f, Fe::ZERO));
    Ok(delta.specialize(&point)?.is_zero())
}
