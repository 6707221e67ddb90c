//! Univariate polynomials over a [`FiniteField`], with factorization.
//!
//! Coefficients are stored low to high. Operations take the coefficient
//! field as an explicit context argument.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Fe, FiniteField};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Fe>,
}

impl Ord for Poly {
    /// Degree first, then coefficients compared from the constant term up.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Output of [`Poly::factor`]: `lc * prod(f_i^{e_i})`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Factorization {
    pub lc: Fe,
    pub factors: Vec<(Poly, u32)>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last() == Some(&Fe::ZERO) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    pub fn one() -> Self {
        Poly { coeffs: vec![Fe::ONE] }
    }
    pub fn constant(c: Fe) -> Self {
        Poly::new(vec![c])
    }
    /// The variable `t`.
    pub fn t() -> Self {
        Poly { coeffs: vec![Fe::ZERO, Fe::ONE] }
    }
    /// `t - a`.
    pub fn linear(f: &FiniteField, a: Fe) -> Self {
        Poly::new(vec![f.neg(a), Fe::ONE])
    }

    pub fn from_ints(f: &FiniteField, c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&v| f.from_int(v)).collect())
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }
    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }
    pub fn lc(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }
    pub fn is_monic(&self) -> bool {
        self.lc() == Fe::ONE
    }
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Poly, f: &FiniteField) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }
    pub fn neg(&self, f: &FiniteField) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
    pub fn sub(&self, other: &Poly, f: &FiniteField) -> Poly {
        self.add(&other.neg(f), f)
    }
    pub fn scale(&self, c: Fe, f: &FiniteField) -> Poly {
        Poly::new(self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }
    pub fn mul(&self, other: &Poly, f: &FiniteField) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }
    pub fn pow(&self, e: u32, f: &FiniteField) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self, f);
        }
        out
    }

    /// Euclidean division. Panics if `d` is zero.
    pub fn divrem(&self, d: &Poly, f: &FiniteField) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.deg();
        let inv = f.inv(d.lc());
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Fe::ZERO; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(r[i], inv);
            if c.is_zero() {
                continue;
            }
            q[i - dd] = c;
            for (j, &b) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = f.sub(r[i - dd + j], f.mul(c, b));
            }
        }
        (Poly::new(q), Poly::new(r))
    }
    pub fn rem(&self, d: &Poly, f: &FiniteField) -> Poly {
        self.divrem(d, f).1
    }

    pub fn monic(&self, f: &FiniteField) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f.inv(self.lc()), f)
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly, f: &FiniteField) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn derivative(&self, f: &FiniteField) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, a: Fe, f: &FiniteField) -> Fe {
        self.coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, a), c))
    }

    /// `base^e mod m`.
    pub fn powmod(base: &Poly, mut e: u64, m: &Poly, f: &FiniteField) -> Poly {
        let mut result = Poly::one().rem(m, f);
        let mut b = base.rem(m, f);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b, f).rem(m, f);
            }
            b = b.mul(&b, f).rem(m, f);
            e >>= 1;
        }
        result
    }

    /// Multiplicity of the monic irreducible `p` in `self` (nonzero), and the cofactor.
    pub fn valuation(&self, p: &Poly, f: &FiniteField) -> (u32, Poly) {
        let mut v = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(p, f);
            if !r.is_zero() {
                return (v, cur);
            }
            v += 1;
            cur = q;
        }
    }

    /// Monic irreducible polynomials of degree `d` over `f`, in encoding order.
    pub fn monic_irreducibles(f: &FiniteField, d: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = f.order() as u64;
        (0..q.pow(d as u32))
            .map(move |code| {
                let mut c: Vec<Fe> = (0..d).map(|i| Fe((code / q.pow(i as u32) % q) as u32)).collect();
                c.push(Fe::ONE);
                Poly::new(c)
            })
            .filter(move |p| p.is_irreducible(f))
    }

    pub fn is_irreducible(&self, f: &FiniteField) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(1) => true,
            Some(n) => {
                let m = self.monic(f);
                let q = f.order() as u64;
                let mut h = Poly::t();
                for _ in 0..n / 2 {
                    h = Poly::powmod(&h, q, &m, f);
                    if !h.sub(&Poly::t(), f).gcd(&m, f).is_constant() {
                        return false;
                    }
                }
                true
            }
        }
    }

    /// Factorization into monic irreducibles, sorted by (degree, coefficients).
    pub fn factor(&self, f: &FiniteField) -> Result<Factorization> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let lc = self.lc();
        let mut acc: Vec<(Poly, u32)> = Vec::new();
        for (sqf, mult) in squarefree_decomposition(&self.monic(f), f) {
            for (g, d) in distinct_degree(&sqf, f) {
                for irr in equal_degree(&g, d, f) {
                    acc.push((irr, mult));
                }
            }
        }
        acc.sort();
        let mut merged: Vec<(Poly, u32)> = Vec::new();
        for (p, m) in acc {
            match merged.last_mut() {
                Some((last, lm)) if *last == p => *lm += m,
                _ => merged.push((p, m)),
            }
        }
        Ok(Factorization { lc, factors: merged })
    }

    /// Distinct monic irreducible factors.
    pub fn irreducible_factors(&self, f: &FiniteField) -> Vec<Poly> {
        if self.is_zero() {
            return Vec::new();
        }
        self.factor(f).map(|fa| fa.factors.into_iter().map(|(p, _)| p).collect()).unwrap_or_default()
    }

    /// Roots in `f`, sorted by encoding.
    pub fn roots(&self, f: &FiniteField) -> Vec<Fe> {
        let mut r: Vec<Fe> = self
            .irreducible_factors(f)
            .into_iter()
            .filter(|p| p.deg() == 1)
            .map(|p| f.neg(p.coeff(0)))
            .collect();
        r.sort();
        r
    }

    /// Low-to-high coefficient list, e.g. `[2,0,1]` over a prime field, or
    /// with nested coordinate vectors over an extension.
    pub fn serialize(&self, f: &FiniteField) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|&c| if f.degree() == 1 { c.0.to_string() } else { f.format_coords(c) })
            .collect();
        format!("[{}]", parts.join(","))
    }

    /// Conventional rendering in the variable `var`, e.g. `t^2+t+2`.
    pub fn format(&self, f: &FiniteField, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = f.format(c);
            let cs = if cs.contains('+') { format!("({})", cs) } else { cs };
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{}^{}", var, i),
            };
            parts.push(match (i, c == Fe::ONE) {
                (0, _) => cs,
                (_, true) => mono,
                _ => format!("{}*{}", cs, mono),
            });
        }
        parts.join("+")
    }
}

fn pth_root(a: &Poly, f: &FiniteField) -> Poly {
    let p = f.p() as usize;
    let k = f.degree();
    // c^(1/p) = c^(p^(k-1)) in F_{p^k}.
    Poly::new(
        (0..=a.deg() / p)
            .map(|i| f.frobenius(a.coeff(i * p), k - 1))
            .collect(),
    )
}

/// Square-free decomposition of a monic polynomial: pairs (square-free part, multiplicity).
fn squarefree_decomposition(a: &Poly, f: &FiniteField) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if a.deg() == 0 {
        return out;
    }
    let p = f.p();
    let d = a.derivative(f);
    if d.is_zero() {
        for (g, m) in squarefree_decomposition(&pth_root(a, f), f) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = a.gcd(&d, f);
    let mut w = a.divrem(&c, f).0;
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(&c, f);
        let z = w.divrem(&y, f).0;
        if z.deg() > 0 {
            out.push((z.monic(f), i));
        }
        i += 1;
        w = y;
        c = c.divrem(&w, f).0;
    }
    if c.deg() > 0 {
        for (g, m) in squarefree_decomposition(&pth_root(&c.monic(f), f), f) {
            out.push((g, m * p));
        }
    }
    out
}

/// Distinct-degree factorization of a monic square-free polynomial.
fn distinct_degree(a: &Poly, f: &FiniteField) -> Vec<(Poly, usize)> {
    let q = f.order() as u64;
    let mut out = Vec::new();
    let mut rest = a.clone();
    let mut h = Poly::t();
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        h = Poly::powmod(&h, q, &rest, f);
        let g = h.sub(&Poly::t(), f).gcd(&rest, f);
        if g.deg() > 0 {
            rest = rest.divrem(&g, f).0;
            h = h.rem(&rest, f);
            out.push((g, d));
        }
    }
    if rest.deg() > 0 {
        let dd = rest.deg();
        out.push((rest, dd));
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of distinct monic irreducibles of degree `d`.
fn equal_degree(a: &Poly, d: usize, f: &FiniteField) -> Vec<Poly> {
    if a.deg() == d {
        return vec![a.clone()];
    }
    let q = f.order() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 ^ (a.deg() as u64) << 8 ^ q);
    let n = a.deg();
    loop {
        let r = Poly::new((0..n).map(|_| Fe(rng.gen_range(0..f.order()))).collect());
        if r.deg() == 0 {
            continue;
        }
        // r^((q^d - 1)/2) = (r * r^q * ... * r^{q^{d-1}})^((q-1)/2)
        let mut conj = r.rem(a, f);
        let mut prod = conj.clone();
        for _ in 1..d {
            conj = Poly::powmod(&conj, q, a, f);
            prod = prod.mul(&conj, f).rem(a, f);
        }
        let s = Poly::powmod(&prod, (q - 1) / 2, a, f);
        let g = s.sub(&Poly::one(), f).gcd(a, f);
        if g.deg() > 0 && g.deg() < n {
            let h = a.divrem(&g, f).0;
            let mut out = equal_degree(&g, d, f);
            out.extend(equal_degree(&h.monic(f), d, f));
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn f(p: u64, k: u32) -> FiniteField {
        make_field(p, k).unwrap()
    }

    #[test]
    fn factor_examples_over_f3() {
        let f3 = f(3, 1);
        let fa = Poly::from_ints(&f3, &[-1, 0, 1]).factor(&f3).unwrap();
        assert_eq!(fa.lc, Fe(1));
        assert_eq!(
            fa.factors,
            vec![(Poly::from_ints(&f3, &[1, 1]), 1), (Poly::from_ints(&f3, &[2, 1]), 1)]
        );
        let fa = Poly::from_ints(&f3, &[1, 0, 1]).factor(&f3).unwrap();
        assert_eq!(fa.factors, vec![(Poly::from_ints(&f3, &[1, 0, 1]), 1)]);
        let fa = Poly::from_ints(&f3, &[0, -2, 0, 2]).factor(&f3).unwrap();
        assert_eq!(fa.lc, Fe(2));
        assert_eq!(
            fa.factors,
            vec![
                (Poly::from_ints(&f3, &[0, 1]), 1),
                (Poly::from_ints(&f3, &[1, 1]), 1),
                (Poly::from_ints(&f3, &[2, 1]), 1)
            ]
        );
        assert_eq!(Poly::zero().factor(&f3), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn factor_with_pth_powers() {
        let f3 = f(3, 1);
        // (t+1)^3 (t^2+1)^2 t^6
        let a = Poly::from_ints(&f3, &[1, 1]).pow(3, &f3);
        let b = Poly::from_ints(&f3, &[1, 0, 1]).pow(2, &f3);
        let c = Poly::t().pow(6, &f3);
        let prod = a.mul(&b, &f3).mul(&c, &f3);
        let fa = prod.factor(&f3).unwrap();
        assert_eq!(
            fa.factors,
            vec![
                (Poly::t(), 6),
                (Poly::from_ints(&f3, &[1, 1]), 3),
                (Poly::from_ints(&f3, &[1, 0, 1]), 2)
            ]
        );
    }

    fn reassemble(fa: &Factorization, fld: &FiniteField) -> Poly {
        fa.factors
            .iter()
            .fold(Poly::constant(fa.lc), |acc, (p, e)| acc.mul(&p.pow(*e, fld), fld))
    }

    #[test]
    fn factor_reassembles_over_extensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for (p, k) in [(3, 2), (5, 2), (3, 3), (7, 1)] {
            let fld = f(p, k);
            for _ in 0..40 {
                let deg = rng.gen_range(1..8);
                let mut c: Vec<Fe> = (0..deg).map(|_| Fe(rng.gen_range(0..fld.order()))).collect();
                c.push(Fe(rng.gen_range(1..fld.order())));
                let a = Poly::new(c);
                let fa = a.factor(&fld).unwrap();
                assert_eq!(reassemble(&fa, &fld), a);
                for (g, _) in &fa.factors {
                    assert!(g.is_monic() && g.is_irreducible(&fld));
                }
                let mut sorted = fa.factors.clone();
                sorted.sort();
                sorted.dedup_by(|x, y| x.0 == y.0);
                assert_eq!(sorted.len(), fa.factors.len());
            }
        }
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // Number of monic irreducible quadratics over F_q is (q^2 - q)/2.
        for (p, k) in [(3, 1), (5, 1), (3, 2)] {
            let fld = f(p, k);
            let q = fld.order();
            let mut count = 0;
            for c0 in 0..q {
                for c1 in 0..q {
                    if Poly::new(vec![Fe(c0), Fe(c1), Fe::ONE]).is_irreducible(&fld) {
                        count += 1;
                    }
                }
            }
            assert_eq!(count, (q * q - q) / 2);
        }
    }

    #[test]
    fn roots_of_t_q_minus_t() {
        let fld = f(3, 2);
        let mut c = vec![Fe::ZERO; 10];
        c[9] = Fe::ONE;
        c[1] = fld.neg(Fe::ONE);
        let r = Poly::new(c).roots(&fld);
        assert_eq!(r.len(), 9);
    }
}
