//! Milnor-Witt K-theory of finite fields and of rational function fields.
//!
//! An element is a homogeneous sum of terms `c * eta^m [u_1, ..., u_k]` of
//! degree `k - m`. Over a finite field `F_q` the groups are known: zero in
//! degrees `>= 2`, `F_q^x` in degree 1, `GW(F_q)` in degree 0 and `W(F_q)` in
//! negative degrees. [`KmwFq::class`] computes the image of an element in that
//! model, which decides equality.

mod ft;
mod ratfn;

pub use ft::{equal_ft, ClosedPoint, KmwFt};
pub use ratfn::RatFn;

use std::fmt;

use serde_json::json;

use crate::error::{Error, Result};
use crate::ext::Embedding;
use crate::field::{Fe, FiniteField};
use crate::gw::{GwElement, GwField, WittElement};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Term<T> {
    pub coeff: i64,
    pub eta: u32,
    pub entries: Vec<T>,
}

impl<T> Term<T> {
    pub fn degree(&self) -> i64 {
        self.entries.len() as i64 - self.eta as i64
    }
}

/// Concatenates entry lists, adds eta powers, multiplies coefficients.
pub(crate) fn mul_terms<T: Clone>(a: &[Term<T>], b: &[Term<T>]) -> Vec<Term<T>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            let mut entries = x.entries.clone();
            entries.extend(y.entries.iter().cloned());
            out.push(Term { coeff: x.coeff * y.coeff, eta: x.eta + y.eta, entries });
        }
    }
    out
}

/// Merges identical terms and drops zero coefficients.
pub(crate) fn collect_terms<T: Clone + Ord>(mut terms: Vec<Term<T>>) -> Vec<Term<T>> {
    terms.sort_by(|a, b| (a.eta, &a.entries).cmp(&(b.eta, &b.entries)));
    let mut out: Vec<Term<T>> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.last_mut() {
            Some(last) if last.eta == t.eta && last.entries == t.entries => last.coeff += t.coeff,
            _ => out.push(t),
        }
        if out.last().is_some_and(|l| l.coeff == 0) {
            out.pop();
        }
    }
    out
}

pub(crate) fn format_terms<T>(terms: &[Term<T>], fmt_entry: impl Fn(&T) -> String) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let mut body = Vec::new();
        if t.eta > 0 {
            body.push(if t.eta == 1 { "eta".to_string() } else { format!("eta^{}", t.eta) });
        }
        if !t.entries.is_empty() {
            body.push(format!("[{}]", t.entries.iter().map(&fmt_entry).collect::<Vec<_>>().join(",")));
        }
        let mag = t.coeff.abs();
        let body = match (mag, body.is_empty()) {
            (_, true) => mag.to_string(),
            (1, false) => body.join("*"),
            _ => format!("{}*{}", mag, body.join("*")),
        };
        match (i, t.coeff < 0) {
            (0, true) => out.push_str(&format!("-{body}")),
            (0, false) => out.push_str(&body),
            (_, true) => out.push_str(&format!(" - {body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
        }
    }
    out
}

/// A homogeneous element of `K^MW_n(F_q)`.
#[derive(Clone, Debug)]
pub struct KmwFq {
    field: FiniteField,
    degree: i64,
    terms: Vec<Term<Fe>>,
}

/// Image of an element of `K^MW_n(F_q)` in the structural model.
#[derive(Clone, Debug)]
pub enum KmwClass {
    /// Degrees `>= 2`.
    Zero,
    /// Degree 1: the unit `u` with `x = [u]`.
    Unit(Fe),
    /// Degree 0.
    Gw(GwElement),
    /// Negative degrees.
    Witt(WittElement),
}

/// Hashable summary of a [`KmwClass`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ClassKey {
    Zero,
    Unit(u32),
    Gw { rank: i64, disc: i64 },
    Witt { parity: u8, disc: i64 },
}

impl KmwClass {
    pub fn key(&self) -> ClassKey {
        match self {
            KmwClass::Zero => ClassKey::Zero,
            KmwClass::Unit(u) => ClassKey::Unit(u.0),
            KmwClass::Gw(g) => ClassKey::Gw { rank: g.rank(), disc: g.disc() },
            KmwClass::Witt(w) => ClassKey::Witt { parity: w.dim_parity, disc: w.disc },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            KmwClass::Zero => true,
            KmwClass::Unit(u) => *u == Fe::ONE,
            KmwClass::Gw(g) => g.is_zero(),
            KmwClass::Witt(w) => w.is_zero(),
        }
    }

    pub fn to_json(&self, field: &FiniteField) -> serde_json::Value {
        match self {
            KmwClass::Zero => json!({"kind": "zero"}),
            KmwClass::Unit(u) => json!({"kind": "milnor", "unit": field.format(*u)}),
            KmwClass::Gw(g) => json!({"kind": "gw", "form": g.serialize(), "invariants": g.invariants()}),
            KmwClass::Witt(w) => json!({"kind": "witt", "dim_parity": w.dim_parity, "disc": w.disc}),
        }
    }
}

impl KmwFq {
    pub fn zero(field: &FiniteField, degree: i64) -> Self {
        KmwFq { field: field.clone(), degree, terms: Vec::new() }
    }

    /// The constant `n` in degree 0.
    pub fn integer(field: &FiniteField, n: i64) -> Self {
        KmwFq::from_terms(field, 0, vec![Term { coeff: n, eta: 0, entries: vec![] }]).unwrap()
    }

    pub fn symbol(field: &FiniteField, eta: u32, entries: &[Fe]) -> Result<Self> {
        KmwFq::from_terms(field, entries.len() as i64 - eta as i64, vec![Term { coeff: 1, eta, entries: entries.to_vec() }])
    }

    /// `<u> = 1 + eta[u]` in degree 0.
    pub fn angle(field: &FiniteField, u: Fe) -> Result<Self> {
        KmwFq::integer(field, 1).add(&KmwFq::symbol(field, 1, &[u])?)
    }

    pub fn from_terms(field: &FiniteField, degree: i64, terms: Vec<Term<Fe>>) -> Result<Self> {
        for t in &terms {
            if t.degree() != degree {
                return Err(Error::DegreeMismatch(degree, t.degree()));
            }
            if t.entries.iter().any(|e| e.is_zero()) {
                return Err(Error::ZeroUnit("symbol entry"));
            }
        }
        Ok(KmwFq { field: field.clone(), degree, terms: collect_terms(terms) })
    }

    /// Image of a degree-0 Grothendieck-Witt class, via `<a> = 1 + eta[a]`.
    pub fn from_gw(g: &GwElement) -> Result<Self> {
        let GwField::Finite(field) = g.field() else {
            return Err(Error::Unsupported("K^MW of Q".into()));
        };
        let mut terms = Vec::new();
        for (&rep, &c) in g.terms() {
            terms.push(Term { coeff: c, eta: 0, entries: vec![] });
            if rep != 1 {
                terms.push(Term { coeff: c, eta: 1, entries: vec![Fe(rep as u32)] });
            }
        }
        KmwFq::from_terms(field, 0, terms)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }
    pub fn degree(&self) -> i64 {
        self.degree
    }
    pub fn terms(&self) -> &[Term<Fe>] {
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
        Ok(KmwFq { field: self.field.clone(), degree: self.degree, terms: collect_terms(terms) })
    }

    pub fn scale(&self, k: i64) -> Self {
        let terms = self.terms.iter().map(|t| Term { coeff: t.coeff * k, ..t.clone() }).collect();
        KmwFq { field: self.field.clone(), degree: self.degree, terms: collect_terms(terms) }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(KmwFq {
            field: self.field.clone(),
            degree: self.degree + other.degree,
            terms: collect_terms(mul_terms(&self.terms, &other.terms)),
        })
    }

    pub fn eta_mul(&self) -> Self {
        let terms = self.terms.iter().map(|t| Term { eta: t.eta + 1, ..t.clone() }).collect();
        KmwFq { field: self.field.clone(), degree: self.degree - 1, terms }
    }

    /// `<u> * self`.
    pub fn angle_mul(&self, u: Fe) -> Result<Self> {
        KmwFq::angle(&self.field, u)?.mul(self)
    }

    /// Image under a field embedding `F_q -> F_{q^r}`.
    pub fn restrict(&self, emb: &Embedding) -> Result<Self> {
        if *emb.src() != self.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", emb.src(), self.field)));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term { entries: t.entries.iter().map(|&e| emb.apply(e)).collect(), ..t.clone() })
            .collect();
        Ok(KmwFq { field: emb.dst().clone(), degree: self.degree, terms: collect_terms(terms) })
    }

    fn gw_of_term(&self, t: &Term<Fe>) -> GwElement {
        let g = GwField::Finite(self.field.clone());
        let one = GwElement::one(&g);
        let mut prod = one.clone();
        for &u in &t.entries {
            let a = GwElement::angle(&self.field, u).expect("nonzero entry").sub(&one).unwrap();
            prod = prod.mul(&a).unwrap();
        }
        prod.scale(t.coeff)
    }

    /// Image in the structural model of `K^MW_n(F_q)`.
    pub fn class(&self) -> KmwClass {
        let f = &self.field;
        match self.degree {
            n if n >= 2 => KmwClass::Zero,
            1 => {
                // eta-multiples vanish because I^2(F_q) = 0.
                let u = self
                    .terms
                    .iter()
                    .filter(|t| t.eta == 0)
                    .fold(Fe::ONE, |acc, t| {
                        let c = t.coeff.rem_euclid(f.order() as i64 - 1) as u64;
                        f.mul(acc, f.pow(t.entries[0], c))
                    });
                KmwClass::Unit(u)
            }
            n => {
                let g = GwField::Finite(f.clone());
                let total = self.terms.iter().fold(GwElement::zero(&g), |acc, t| acc.add(&self.gw_of_term(t)).unwrap());
                if n == 0 {
                    KmwClass::Gw(total)
                } else {
                    KmwClass::Witt(total.witt_project().unwrap())
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.class().is_zero()
    }

    /// Decides equality in `K^MW_n(F_q)`.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        Ok(self.sub(other)?.is_zero())
    }

    /// A short fixed representative of the class of `self`.
    pub fn canonical(&self) -> KmwFq {
        let f = &self.field;
        let n = self.degree;
        let terms = match self.class() {
            KmwClass::Zero => vec![],
            KmwClass::Unit(u) if u == Fe::ONE => vec![],
            KmwClass::Unit(u) => vec![Term { coeff: 1, eta: 0, entries: vec![u] }],
            KmwClass::Gw(g) => {
                let mut t = vec![Term { coeff: g.rank(), eta: 0, entries: vec![] }];
                if g.disc() != 1 {
                    t.push(Term { coeff: 1, eta: 1, entries: vec![Fe(g.disc() as u32)] });
                }
                t
            }
            KmwClass::Witt(w) => {
                let s = (-n) as u32;
                let mut t = Vec::new();
                let lift = w.lift();
                for (&rep, &c) in lift.terms() {
                    t.push(Term { coeff: c, eta: s, entries: vec![] });
                    if rep != 1 {
                        t.push(Term { coeff: c, eta: s + 1, entries: vec![Fe(rep as u32)] });
                    }
                }
                t
            }
        };
        KmwFq { field: f.clone(), degree: n, terms: collect_terms(terms) }
    }

    pub fn key(&self) -> ClassKey {
        self.class().key()
    }

    pub fn serialize(&self) -> String {
        format_terms(&self.terms, |&e| self.field.format(e))
    }
}

impl fmt::Display for KmwFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn sym(f: &FiniteField, eta: u32, e: &[i64]) -> KmwFq {
        KmwFq::symbol(f, eta, &e.iter().map(|&x| f.from_int(x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn symbol_degrees() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(sym(&f5, 0, &[2]).degree(), 1);
        assert_eq!(sym(&f5, 1, &[2, 2]).degree(), 1);
        assert_eq!(sym(&f5, 2, &[]).degree(), -2);
        assert!(KmwFq::symbol(&f5, 0, &[Fe::ZERO]).is_err());
        assert!(sym(&f5, 0, &[2]).add(&sym(&f5, 0, &[2, 3])).is_err());
    }

    #[test]
    fn normal_form_examples() {
        let f5 = make_field(5, 1).unwrap();
        let lhs = sym(&f5, 0, &[4]);
        let rhs = sym(&f5, 0, &[2]).add(&sym(&f5, 0, &[2])).unwrap();
        assert!(lhs.equals(&rhs).unwrap());
        assert!(sym(&f5, 0, &[2]).scale(2).equals(&sym(&f5, 0, &[4])).unwrap());
        assert!(!sym(&f5, 0, &[2]).equals(&sym(&f5, 0, &[3])).unwrap());
        assert!(sym(&f5, 1, &[2]).equals(&sym(&f5, 1, &[3])).unwrap());
        let f3 = make_field(3, 1).unwrap();
        assert!(sym(&f3, 0, &[2, 2]).is_zero());
        for (p, k) in [(3, 1), (5, 1), (3, 2)] {
            let f = make_field(p, k).unwrap();
            assert!(KmwFq::symbol(&f, 0, &[Fe::ONE]).unwrap().is_zero());
        }
    }

    #[test]
    fn eta_kills_hyperbolic() {
        for (p, k) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            let f = make_field(p, k).unwrap();
            let m1 = f.neg(Fe::ONE);
            let h = KmwFq::integer(&f, 2).add(&KmwFq::symbol(&f, 1, &[m1]).unwrap()).unwrap();
            assert!(h.eta_mul().is_zero());
            assert!(KmwFq::from_gw(&GwElement::hyperbolic(&GwField::Finite(f.clone()))).unwrap().equals(&h).unwrap());
        }
    }

    #[test]
    fn defining_relations_exhaustive() {
        for p in [3u64, 5, 7] {
            let f = make_field(p, 1).unwrap();
            let units: Vec<Fe> = f.units().collect();
            let m1 = f.neg(Fe::ONE);
            for &u in &units {
                let s = KmwFq::symbol(&f, 0, &[u]).unwrap();
                // [u][u] = [u][-1]
                assert!(s.mul(&s).unwrap().equals(&s.mul(&KmwFq::symbol(&f, 0, &[m1]).unwrap()).unwrap()).unwrap());
                let one_minus = f.sub(Fe::ONE, u);
                if u != Fe::ONE {
                    assert!(KmwFq::symbol(&f, 0, &[u, one_minus]).unwrap().is_zero());
                    assert!(KmwFq::symbol(&f, 1, &[u, one_minus]).unwrap().is_zero());
                }
                for &v in &units {
                    let sv = KmwFq::symbol(&f, 0, &[v]).unwrap();
                    let uv = KmwFq::symbol(&f, 0, &[f.mul(u, v)]).unwrap();
                    let rhs = s.add(&sv).unwrap().add(&KmwFq::symbol(&f, 1, &[u, v]).unwrap()).unwrap();
                    assert!(uv.equals(&rhs).unwrap());
                    // eta[uv] = eta[u] + eta[v] + eta^2[u,v] in degree 0 and below
                    let lhs = uv.eta_mul().eta_mul();
                    let rhs2 = rhs.eta_mul().eta_mul();
                    assert!(lhs.equals(&rhs2).unwrap());
                    // [u][v] = <-1>[v][u]
                    let uvsym = KmwFq::symbol(&f, 0, &[u, v]).unwrap();
                    let vu = KmwFq::symbol(&f, 0, &[v, u]).unwrap().angle_mul(m1).unwrap();
                    assert!(uvsym.equals(&vu).unwrap());
                    let uve = uvsym.eta_mul().eta_mul();
                    let vue = vu.eta_mul().eta_mul();
                    assert!(uve.equals(&vue).unwrap());
                }
            }
        }
    }

    #[test]
    fn witt_order_in_degree_minus_one() {
        for (p, k) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2), (3, 3)] {
            let f = make_field(p, k).unwrap();
            let eta = KmwFq::symbol(&f, 1, &[]).unwrap();
            let order = (1..=4).find(|&n| eta.scale(n).is_zero()).unwrap();
            assert_eq!(order, if f.order() % 4 == 3 { 4 } else { 2 });
        }
    }

    #[test]
    fn canonical_representatives() {
        for (p, k) in [(3u64, 1u32), (5, 1), (3, 2)] {
            let f = make_field(p, k).unwrap();
            let units: Vec<Fe> = f.units().take(6).collect();
            for deg_eta in 0..3u32 {
                for &a in &units {
                    for &b in &units {
                        let x = KmwFq::symbol(&f, deg_eta, &[a, b])
                            .unwrap()
                            .add(&KmwFq::symbol(&f, deg_eta, &[b, a]).unwrap().scale(3))
                            .unwrap();
                        let c = x.canonical();
                        assert!(c.equals(&x).unwrap());
                        assert_eq!(c.key(), x.key());
                        assert!(c.terms().len() <= 2);
                    }
                }
            }
        }
    }

    #[test]
    fn restriction_to_extensions() {
        let f3 = make_field(3, 1).unwrap();
        let f9 = make_field(3, 2).unwrap();
        let emb = Embedding::canonical(&f3, &f9).unwrap();
        // Every element of F_3 is a square in F_9.
        let x = KmwFq::symbol(&f3, 0, &[f3.from_int(2)]).unwrap();
        assert!(!x.is_zero());
        let y = x.eta_mul();
        assert!(!y.is_zero());
        assert!(y.restrict(&emb).unwrap().is_zero());
        assert!(!x.restrict(&emb).unwrap().is_zero());
    }

    #[test]
    fn serialization() {
        let f5 = make_field(5, 1).unwrap();
        let x = sym(&f5, 1, &[2, 3]).add(&sym(&f5, 0, &[4]).scale(-2)).unwrap();
        assert_eq!(x.serialize(), "-2*[4] + eta*[2,3]");
        assert_eq!(KmwFq::zero(&f5, 1).serialize(), "0");
        assert_eq!(KmwFq::integer(&f5, 3).serialize(), "3");
    }
}
