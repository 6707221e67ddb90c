//! Evaluation of scalar sub-expressions in the algebras they can live in.

use num_traits::{One, Zero};

use super::parse::Elem;
use crate::error::{Error, Result};
use crate::field::{Fe, FiniteField};
use crate::gram::RationalExtension;
use crate::kmw::RatFn;
use crate::poly::Poly;
use crate::rational::Q;

pub(super) trait Alg {
    type V: Clone;
    fn int(&self, n: i64) -> Self::V;
    fn x(&self) -> Result<Self::V>;
    fn t(&self) -> Result<Self::V>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn inv(&self, a: &Self::V) -> Result<Self::V>;
    fn neg(&self, a: &Self::V) -> Self::V {
        self.mul(&self.int(-1), a)
    }
}

pub(super) fn eval<A: Alg>(alg: &A, e: &Elem) -> Result<A::V> {
    let bin = |a: &Elem, b: &Elem| -> Result<(A::V, A::V)> { Ok((eval(alg, a)?, eval(alg, b)?)) };
    Ok(match e {
        Elem::Int(n) => alg.int(*n),
        Elem::X => alg.x()?,
        Elem::T => alg.t()?,
        Elem::Add(a, b) => {
            let (a, b) = bin(a, b)?;
            alg.add(&a, &b)
        }
        Elem::Sub(a, b) => {
            let (a, b) = bin(a, b)?;
            alg.add(&a, &alg.neg(&b))
        }
        Elem::Mul(a, b) => {
            let (a, b) = bin(a, b)?;
            alg.mul(&a, &b)
        }
        Elem::Div(a, b) => {
            let (a, b) = bin(a, b)?;
            alg.mul(&a, &alg.inv(&b)?)
        }
        Elem::Neg(a) => alg.neg(&eval(alg, a)?),
        Elem::Pow(a, k) => {
            let base = eval(alg, a)?;
            let base = if *k < 0 { alg.inv(&base)? } else { base };
            let mut acc = alg.int(1);
            for _ in 0..k.unsigned_abs() {
                acc = alg.mul(&acc, &base);
            }
            acc
        }
    })
}

/// Fractions of polynomials in `t` over a finite field, with `x` its generator.
/// Covers field elements, polynomials and rational functions alike.
pub(super) struct Frac<'a>(pub &'a FiniteField);

impl Alg for Frac<'_> {
    type V = (Poly, Poly);
    fn int(&self, n: i64) -> Self::V {
        (Poly::constant(self.0.from_int(n)), Poly::one())
    }
    fn x(&self) -> Result<Self::V> {
        Ok((Poly::constant(self.0.gen()), Poly::one()))
    }
    fn t(&self) -> Result<Self::V> {
        Ok((Poly::t(), Poly::one()))
    }
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V {
        let f = self.0;
        let num = a.0.mul(&b.1, f).add(&b.0.mul(&a.1, f), f);
        (num, a.1.mul(&b.1, f))
    }
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V {
        (a.0.mul(&b.0, self.0), a.1.mul(&b.1, self.0))
    }
    fn inv(&self, a: &Self::V) -> Result<Self::V> {
        if a.0.is_zero() {
            return Err(Error::Semantic("division by zero".into()));
        }
        Ok((a.1.clone(), a.0.clone()))
    }
}

impl Frac<'_> {
    pub fn poly(&self, e: &Elem) -> Result<Poly> {
        let (num, den) = eval(self, e)?;
        if !den.is_constant() {
            return Err(Error::Semantic("expected a polynomial, got a fraction".into()));
        }
        Ok(num.scale(self.0.inv(den.lc()), self.0))
    }

    pub fn element(&self, e: &Elem) -> Result<Fe> {
        let p = self.poly(e)?;
        if !p.is_constant() {
            return Err(Error::Semantic(format!("expected an element of {}, got a polynomial in t", self.0)));
        }
        Ok(p.coeff(0))
    }

    pub fn unit(&self, e: &Elem) -> Result<Fe> {
        let a = self.element(e)?;
        if a.is_zero() {
            return Err(Error::ZeroUnit("symbol entry"));
        }
        Ok(a)
    }

    pub fn ratfn(&self, e: &Elem) -> Result<RatFn> {
        let (num, den) = eval(self, e)?;
        RatFn::new(self.0, &num, &den)
    }
}

/// Polynomials in `t` with rational coefficients, low to high.
pub(super) struct QPoly;

fn trim(mut v: Vec<Q>) -> Vec<Q> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

impl Alg for QPoly {
    type V = Vec<Q>;
    fn int(&self, n: i64) -> Self::V {
        trim(vec![Q::from(n as i128)])
    }
    fn x(&self) -> Result<Self::V> {
        Err(Error::Semantic("`x` has no meaning in a polynomial over Q; use t".into()))
    }
    fn t(&self) -> Result<Self::V> {
        Ok(vec![Q::zero(), Q::one()])
    }
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V {
        let n = a.len().max(b.len());
        let z = Q::zero();
        trim((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
    }
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Q::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }
    fn inv(&self, a: &Self::V) -> Result<Self::V> {
        match a.as_slice() {
            [c] => Ok(vec![c.recip()]),
            [] => Err(Error::Semantic("division by zero".into())),
            _ => Err(Error::Semantic("only division by nonzero rationals is supported".into())),
        }
    }
}

/// `Q[x]/(f)`, elements in the power basis.
pub(super) struct QExt<'a>(pub &'a RationalExtension);

impl Alg for QExt<'_> {
    type V = Vec<Q>;
    fn int(&self, n: i64) -> Self::V {
        self.0.one().into_iter().map(|c| c * Q::from(n as i128)).collect()
    }
    fn x(&self) -> Result<Self::V> {
        Ok(self.0.generator())
    }
    fn t(&self) -> Result<Self::V> {
        Err(Error::Semantic("`t` has no meaning in a number field; use x".into()))
    }
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V {
        self.0.mul(a, b)
    }
    fn inv(&self, a: &Self::V) -> Result<Self::V> {
        if a.iter().skip(1).any(|c| !c.is_zero()) {
            return Err(Error::Semantic("only division by nonzero rationals is supported".into()));
        }
        if a[0].is_zero() {
            return Err(Error::Semantic("division by zero".into()));
        }
        Ok(self.int(1).into_iter().map(|c| c / a[0]).collect())
    }
}
