use std::fmt::Write;

use crate::error::{Error, Result};
use crate::field::{Fe, FiniteField};
use crate::poly::Poly;

/// A nonzero element `lc * num / den` of `F_q(t)` with `num`, `den` monic and coprime.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RatFn {
    lc: Fe,
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(f: &FiniteField, num: &Poly, den: &Poly) -> Result<Self> {
        if num.is_zero() || den.is_zero() {
            return Err(Error::ZeroUnit("rational function"));
        }
        let g = num.gcd(den, f);
        let (n, _) = num.divrem(&g, f);
        let (d, _) = den.divrem(&g, f);
        Ok(RatFn { lc: f.div(n.lc(), d.lc()), num: n.monic(f), den: d.monic(f) })
    }

    pub fn constant(c: Fe) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroUnit("rational function"));
        }
        Ok(RatFn { lc: c, num: Poly::one(), den: Poly::one() })
    }

    pub fn from_poly(f: &FiniteField, p: &Poly) -> Result<Self> {
        RatFn::new(f, p, &Poly::one())
    }

    pub fn t() -> Self {
        RatFn { lc: Fe::ONE, num: Poly::t(), den: Poly::one() }
    }

    pub fn lc(&self) -> Fe {
        self.lc
    }
    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The full numerator `lc * num`.
    pub fn numerator(&self, f: &FiniteField) -> Poly {
        self.num.scale(self.lc, f)
    }

    pub fn mul(&self, other: &Self, f: &FiniteField) -> Self {
        let num = self.num.mul(&other.num, f);
        let den = self.den.mul(&other.den, f);
        let mut r = RatFn::new(f, &num, &den).expect("product of units");
        r.lc = f.mul(self.lc, other.lc);
        r
    }

    pub fn inv(&self, f: &FiniteField) -> Self {
        RatFn { lc: f.inv(self.lc), num: self.den.clone(), den: self.num.clone() }
    }

    pub fn neg(&self, f: &FiniteField) -> Self {
        RatFn { lc: f.neg(self.lc), ..self.clone() }
    }

    pub fn scale(&self, c: Fe, f: &FiniteField) -> Self {
        RatFn { lc: f.mul(self.lc, c), ..self.clone() }
    }

    /// Sum, or `None` when it vanishes.
    pub fn add(&self, other: &Self, f: &FiniteField) -> Option<Self> {
        let n = self.numerator(f).mul(&other.den, f).add(&other.numerator(f).mul(&self.den, f), f);
        RatFn::new(f, &n, &self.den.mul(&other.den, f)).ok()
    }

    /// `1 - self`, or `None` when `self = 1`.
    pub fn one_minus(&self, f: &FiniteField) -> Option<Self> {
        RatFn::constant(Fe::ONE).unwrap().add(&self.neg(f), f)
    }

    /// `v_p(self)` for a monic irreducible `p`.
    pub fn valuation(&self, p: &Poly, f: &FiniteField) -> i64 {
        self.num.valuation(p, f).0 as i64 - self.den.valuation(p, f).0 as i64
    }

    /// Valuation at infinity, `deg den - deg num`.
    pub fn valuation_at_infinity(&self) -> i64 {
        self.den.deg() as i64 - self.num.deg() as i64
    }

    /// Monic irreducible factors with their exponents, sorted.
    pub fn factors(&self, f: &FiniteField) -> Vec<(Poly, i64)> {
        let mut out: Vec<(Poly, i64)> = Vec::new();
        for (p, sign) in [(&self.num, 1i64), (&self.den, -1)] {
            if p.is_constant() {
                continue;
            }
            for (q, e) in p.factor(f).expect("nonzero").factors {
                out.push((q, sign * e as i64));
            }
        }
        out.sort();
        out
    }

    /// Value at `a`, or `None` if `a` is a zero or pole.
    pub fn eval(&self, a: Fe, f: &FiniteField) -> Option<Fe> {
        let n = self.num.eval(a, f);
        let d = self.den.eval(a, f);
        if n.is_zero() || d.is_zero() {
            return None;
        }
        Some(f.mul(self.lc, f.div(n, d)))
    }

    /// Substitutes `t -> g(t)` for a nonconstant `g`.
    pub fn compose(&self, g: &Poly, f: &FiniteField) -> Self {
        let sub = |p: &Poly| {
            let mut acc = Poly::zero();
            for &c in p.coeffs().iter().rev() {
                acc = acc.mul(g, f).add(&Poly::constant(c), f);
            }
            acc
        };
        RatFn::new(f, &sub(&self.numerator(f)), &sub(&self.den)).expect("substitution of a unit")
    }

    pub fn format(&self, f: &FiniteField) -> String {
        let mut s = String::new();
        let num_const = self.num.is_constant();
        if self.lc != Fe::ONE || num_const {
            let c = f.format(self.lc);
            if c.contains('+') && !num_const {
                write!(s, "({c})*").unwrap();
            } else if num_const {
                s.push_str(&if c.contains('+') && !self.den.is_constant() { format!("({c})") } else { c });
            } else {
                write!(s, "{c}*").unwrap();
            }
        }
        if !num_const {
            let n = self.num.format(f, "t");
            if self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                write!(s, "({n})").unwrap();
            } else {
                s.push_str(&n);
            }
        }
        if !self.den.is_constant() {
            write!(s, "/({})", self.den.format(f, "t")).unwrap();
        }
        s
    }
}
