//! Grothendieck-Witt and Witt rings of odd finite fields and of `Q`.
//!
//! Elements are integer combinations of one-dimensional forms `<a>`, keyed by
//! a canonical representative of the square class of `a`. Equality is
//! decided by complete invariants: `(rank, disc)` over `F_q`, and
//! `(rank, signature, disc, Hasse symbols)` over `Q`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fe, FiniteField};
use crate::rational::{hilbert_symbol, prime_divisors, Place, RatSquareClass, Q};

pub const DEFAULT_NILPOTENCY_BOUND: u32 = 8;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GwField {
    Finite(FiniteField),
    Rationals,
}

impl fmt::Display for GwField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GwField::Finite(k) => write!(f, "{}", k),
            GwField::Rationals => write!(f, "Q"),
        }
    }
}

impl GwField {
    fn mul_reps(&self, a: i64, b: i64) -> i64 {
        match self {
            GwField::Finite(k) => k.class_rep(k.mul(Fe(a as u32), Fe(b as u32))).0 as i64,
            GwField::Rationals => (RatSquareClass::of_int(a as i128).unwrap() * RatSquareClass::of_int(b as i128).unwrap()).rep(),
        }
    }
    fn minus_one(&self) -> i64 {
        match self {
            GwField::Finite(k) => k.class_rep(k.neg(Fe::ONE)).0 as i64,
            GwField::Rationals => -1,
        }
    }
    fn format_rep(&self, r: i64) -> String {
        match self {
            GwField::Finite(k) => {
                let a = Fe(r as u32);
                if a.0 < k.p() {
                    // Print the prime-field representative in symmetric form.
                    let v = a.0 as i64;
                    if v > k.p() as i64 / 2 { (v - k.p() as i64).to_string() } else { v.to_string() }
                } else {
                    k.format(a)
                }
            }
            GwField::Rationals => r.to_string(),
        }
    }
}

/// `sum_a c_a <a>` over a supported field.
#[derive(Clone, Debug)]
pub struct GwElement {
    field: GwField,
    terms: BTreeMap<i64, i64>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GwInvariants {
    pub rank: i64,
    /// Canonical representative of the (plain product) discriminant.
    pub disc: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<i64>,
    /// Primes at which the stabilised Hasse invariant is `-1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hasse: Option<BTreeMap<u64, i8>>,
}

impl GwElement {
    pub fn zero(field: &GwField) -> Self {
        GwElement { field: field.clone(), terms: BTreeMap::new() }
    }
    pub fn one(field: &GwField) -> Self {
        GwElement::zero(field).with_term(1, 1)
    }

    fn with_term(mut self, rep: i64, c: i64) -> Self {
        self.add_term(rep, c);
        self
    }

    fn add_term(&mut self, rep: i64, c: i64) {
        let e = self.terms.entry(rep).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&rep);
        }
    }

    /// `<a>` for a unit of a finite field.
    pub fn angle(field: &FiniteField, a: Fe) -> Result<Self> {
        GwElement::from_diagonal(field, &[a])
    }

    /// `sum <u_i>` over a finite field.
    pub fn from_diagonal(field: &FiniteField, units: &[Fe]) -> Result<Self> {
        let gf = GwField::Finite(field.clone());
        let mut out = GwElement::zero(&gf);
        for &u in units {
            if u.is_zero() {
                return Err(Error::ZeroUnit("diagonal entry"));
            }
            out.add_term(field.class_rep(u).0 as i64, 1);
        }
        Ok(out)
    }

    /// `sum <u_i>` over `Q`.
    pub fn from_rational_diagonal(units: &[Q]) -> Result<Self> {
        let mut out = GwElement::zero(&GwField::Rationals);
        for u in units {
            out.add_term(RatSquareClass::of(u)?.rep(), 1);
        }
        Ok(out)
    }

    pub fn from_terms(field: &GwField, terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut out = GwElement::zero(field);
        for (r, c) in terms {
            out.add_term(r, c);
        }
        out
    }

    /// The hyperbolic plane `<1> + <-1>`.
    pub fn hyperbolic(field: &GwField) -> Self {
        GwElement::one(field).with_term(field.minus_one(), 1)
    }

    /// `n_eps = sum_{i=1}^{n} <-1>^{i-1}`.
    pub fn n_epsilon(field: &GwField, n: u64) -> Self {
        let n = n as i64;
        GwElement::zero(field).with_term(1, (n + 1) / 2).with_term(field.minus_one(), n / 2)
    }

    pub fn field(&self) -> &GwField {
        &self.field
    }
    pub fn terms(&self) -> &BTreeMap<i64, i64> {
        &self.terms
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (&r, &c) in &other.terms {
            out.add_term(r, c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = GwElement::zero(&self.field);
        for (&r, &c) in &self.terms {
            out.add_term(r, c * k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = GwElement::zero(&self.field);
        for (&r1, &c1) in &self.terms {
            for (&r2, &c2) in &other.terms {
                out.add_term(self.field.mul_reps(r1, r2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = GwElement::one(&self.field);
        for _ in 0..n {
            out = out.mul(self).expect("same field");
        }
        out
    }

    pub fn rank(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Discriminant class `prod a^{c_a}`.
    pub fn disc(&self) -> i64 {
        self.terms
            .iter()
            .filter(|(_, &c)| c.rem_euclid(2) == 1)
            .fold(1, |acc, (&r, _)| self.field.mul_reps(acc, r))
    }

    pub fn signature(&self) -> Option<i64> {
        match self.field {
            GwField::Rationals => Some(self.terms.iter().map(|(&r, &c)| r.signum() * c).sum()),
            GwField::Finite(_) => None,
        }
    }

    /// Writes `self = form - k*h` with `form` an honest diagonal form.
    fn genuine_shift(&self) -> (Vec<i64>, i64) {
        let m1 = self.field.minus_one();
        let mut form = Vec::new();
        let mut k = 0;
        for (&r, &c) in &self.terms {
            if c >= 0 {
                form.extend(std::iter::repeat_n(r, c as usize));
            } else {
                // -<a> = <-a> - h
                form.extend(std::iter::repeat_n(self.field.mul_reps(r, m1), (-c) as usize));
                k += -c;
            }
        }
        (form, k)
    }

    fn support_primes(&self) -> BTreeSet<u64> {
        let mut s: BTreeSet<u64> = [2].into_iter().collect();
        for &r in self.terms.keys() {
            s.extend(prime_divisors(r.unsigned_abs()));
        }
        s
    }

    /// Hasse invariant of `self + N h` for `N` a large multiple of 4, which
    /// depends on `self` only.
    fn stable_hasse(&self, p: u64) -> i8 {
        let (mut form, k) = self.genuine_shift();
        let pad = (4 - k.rem_euclid(4)) % 4;
        for _ in 0..pad {
            form.push(1);
            form.push(-1);
        }
        let mut s = 1i8;
        for i in 0..form.len() {
            for j in i + 1..form.len() {
                s *= hilbert_symbol(form[i], form[j], Place::Prime(p));
            }
        }
        s
    }

    pub fn invariants(&self) -> GwInvariants {
        match &self.field {
            GwField::Finite(_) => GwInvariants { rank: self.rank(), disc: self.disc(), signature: None, hasse: None },
            GwField::Rationals => GwInvariants {
                rank: self.rank(),
                disc: self.disc(),
                signature: self.signature(),
                hasse: Some(
                    self.support_primes()
                        .into_iter()
                        .map(|p| (p, self.stable_hasse(p)))
                        .filter(|&(_, s)| s == -1)
                        .collect(),
                ),
            },
        }
    }

    /// Isometry-class equality of virtual forms.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        let d = self.sub(other)?;
        Ok(d.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        let inv = self.invariants();
        inv.rank == 0 && inv.disc == 1 && inv.signature.unwrap_or(0) == 0 && inv.hasse.is_none_or(|h| h.is_empty())
    }

    /// Image in the Witt ring of a finite field.
    pub fn witt_project(&self) -> Result<WittElement> {
        let GwField::Finite(k) = &self.field else {
            return Err(Error::Unsupported("Witt ring of Q".into()));
        };
        let r = self.rank();
        let sign = if r.div_euclid(2) % 2 == 0 { 1 } else { self.field.minus_one() };
        Ok(WittElement {
            field: k.clone(),
            dim_parity: r.rem_euclid(2) as u8,
            disc: self.field.mul_reps(self.disc(), sign),
        })
    }

    /// Least `n >= 1` with `self^n = 0`, for rank-zero elements over a finite field.
    pub fn nilpotent_exponent(&self, bound: u32) -> Result<u32> {
        if !matches!(self.field, GwField::Finite(_)) {
            return Err(Error::Unsupported("nilpotency search over Q".into()));
        }
        if self.rank() != 0 {
            return Err(Error::NonzeroRank(self.rank()));
        }
        let mut power = self.clone();
        for n in 1..=bound {
            if power.is_zero() {
                return Ok(n);
            }
            power = power.mul(self)?;
        }
        Err(Error::NilpotencyBound(bound))
    }

    /// `<a1,a2,...>` for honest forms, `... - <b>` when coefficients are negative.
    pub fn serialize(&self) -> String {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (&r, &c) in &self.terms {
            let s = self.field.format_rep(r);
            for _ in 0..c.abs() {
                if c > 0 { pos.push(s.clone()) } else { neg.push(s.clone()) }
            }
        }
        let mut out = format!("<{}>", pos.join(","));
        if !neg.is_empty() {
            out.push_str(&format!(" - <{}>", neg.join(",")));
        }
        out
    }
}

impl fmt::Display for GwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

/// An element of `W(F_q)`, classified by dimension parity and signed discriminant.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WittElement {
    field: FiniteField,
    pub dim_parity: u8,
    /// Canonical representative of `(-1)^{floor(r/2)} * disc`.
    pub disc: i64,
}

impl WittElement {
    pub fn zero(field: &FiniteField) -> Self {
        WittElement { field: field.clone(), dim_parity: 0, disc: 1 }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.dim_parity == 0 && self.disc == 1
    }

    /// A form of rank at most 2 in this Witt class.
    pub fn lift(&self) -> GwElement {
        let gf = GwField::Finite(self.field.clone());
        let k = &self.field;
        if self.dim_parity == 1 {
            GwElement::from_terms(&gf, [(self.disc, 1)])
        } else if self.disc == 1 {
            GwElement::zero(&gf)
        } else {
            let minus_d = k.class_rep(k.neg(Fe(self.disc as u32))).0 as i64;
            GwElement::from_terms(&gf, [(1, 1), (minus_d, 1)])
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.lift().add(&other.lift())?.witt_project()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.lift().mul(&other.lift())?.witt_project()
    }

    pub fn scale(&self, k: i64) -> Self {
        self.lift().scale(k).witt_project().expect("finite field")
    }

    pub fn additive_order(&self) -> u32 {
        (1..=4).find(|&n| self.scale(n as i64).is_zero()).expect("W(F_q) has exponent dividing 4")
    }
}
