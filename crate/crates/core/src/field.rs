//! Odd-characteristic finite fields `F_{p^k}` with a canonical modulus.
//!
//! Every field of a given order is built once, from the least monic
//! irreducible polynomial of degree `k` over `F_p` (candidates are scanned in
//! the order of their base-`p` encoding `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`).
//! Elements are stored in that same encoding, so an element is a `Copy`
//! integer and the prime subfield is `0..p`.
//!
//! Multiplication goes through discrete log tables, which is why the order
//! of a field is bounded (see [`DEFAULT_ORDER_BOUND`]).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_ORDER_BOUND: u64 = 1_000_000;

/// A finite field element in the base-`p` encoding of its coordinates in the
/// modulus basis `1, x, ..., x^{k-1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct FieldData {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    nonsquare: Fe,
}

/// Handle to a canonical finite field. Cloning is cheap.
#[derive(Clone)]
pub struct FiniteField(Arc<FieldData>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.k == other.0.k
    }
}
impl Eq for FiniteField {}

impl std::hash::Hash for FiniteField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.0.p, self.0.k).hash(state)
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.k)
        }
    }
}

static FIELDS: Lazy<Mutex<HashMap<(u32, u32), FiniteField>>> = Lazy::new(|| Mutex::new(HashMap::new()));

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Builds (or fetches) `F_{p^k}` with the default order bound.
pub fn make_field(p: u64, k: u32) -> Result<FiniteField> {
    make_field_bounded(p, k, DEFAULT_ORDER_BOUND)
}

/// `F_q` for an odd prime power `q`.
pub fn field_of_order(q: u64) -> Result<FiniteField> {
    let p = (2..=q.max(2)).find(|d| q.is_multiple_of(*d)).unwrap_or(q);
    let mut k = 0;
    let mut r = q;
    while r > 1 && r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    if q < 2 || r != 1 {
        return Err(Error::InvalidParam(format!("{q} is not a prime power")));
    }
    make_field(p, k)
}

pub fn make_field_bounded(p: u64, k: u32, bound: u64) -> Result<FiniteField> {
    if p == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    let q = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
    if q > bound as u128 || q > u32::MAX as u128 {
        return Err(Error::FieldTooLarge { p, k, bound });
    }
    let key = (p as u32, k);
    if let Some(f) = FIELDS.lock().unwrap().get(&key) {
        return Ok(f.clone());
    }
    let built = FiniteField(Arc::new(build_field(p as u32, k)));
    Ok(FIELDS.lock().unwrap().entry(key).or_insert(built).clone())
}

// Dense polynomial helpers over F_p, used only while constructing a field.
fn ptrim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn pmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    ptrim(&mut out);
    out
}

/// Remainder modulo a monic polynomial.
fn prem_monic(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    ptrim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
        }
        ptrim(&mut r);
    }
    r
}

fn prem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let lead = *m.last().unwrap();
    let inv = pow_mod(lead, p - 2, p);
    let monic: Vec<u64> = m.iter().map(|c| c * inv % p).collect();
    prem_monic(a, &monic, p)
}

fn pgcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    ptrim(&mut a);
    ptrim(&mut b);
    while !b.is_empty() {
        let r = prem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn ppowmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = prem_monic(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = prem_monic(&pmul(&result, &b, p), m, p);
        }
        b = prem_monic(&pmul(&b, &b, p), m, p);
        e >>= 1;
    }
    result
}

fn is_irreducible_fp(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    let mut h = vec![0u64, 1];
    for _ in 0..k / 2 {
        h = ppowmod(&h, p, f, p);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        ptrim(&mut diff);
        let g = pgcd(&diff, f, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn digits_of(mut v: u64, p: u64, k: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(v % p);
        v /= p;
    }
    out
}

fn encode(d: &[u64], p: u64) -> u32 {
    let mut v = 0u64;
    for &c in d.iter().rev() {
        v = v * p + c;
    }
    v as u32
}

fn build_field(p: u32, k: u32) -> FieldData {
    let pp = p as u64;
    let q = pp.pow(k);
    let modulus: Vec<u64> = if k == 1 {
        vec![0, 1]
    } else {
        (0..q)
            .map(|v| {
                let mut m = digits_of(v, pp, k);
                m.push(1);
                m
            })
            .find(|m| m[0] != 0 && is_irreducible_fp(m, pp))
            .expect("an irreducible polynomial of every degree exists")
    };
    let order = q - 1;
    let factors = prime_factors(order);
    let elem = |v: u64| {
        let mut d = digits_of(v, pp, k);
        ptrim(&mut d);
        d
    };
    let generator = (1..q)
        .find(|&v| {
            let g = elem(v);
            factors.iter().all(|&r| {
                let y = ppowmod(&g, order / r, &modulus, pp);
                y != vec![1]
            })
        })
        .expect("multiplicative group is cyclic");
    let g = elem(generator);
    let mut exp = Vec::with_capacity(order as usize);
    let mut log = vec![0u32; q as usize];
    let mut cur = vec![1u64];
    for i in 0..order {
        let code = encode(&cur, pp);
        exp.push(code);
        log[code as usize] = i as u32;
        cur = prem_monic(&pmul(&cur, &g, pp), &modulus, pp);
    }
    let nonsquare = Fe((1..q as u32).find(|&v| log[v as usize] % 2 == 1).unwrap());
    FieldData {
        p,
        k,
        q: q as u32,
        modulus: modulus.iter().map(|&c| c as u32).collect(),
        exp,
        log,
        nonsquare,
    }
}

impl FiniteField {
    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn degree(&self) -> u32 {
        self.0.k
    }
    pub fn order(&self) -> u32 {
        self.0.q
    }
    /// Coefficients of the modulus, low to high (monic, length `k + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    /// The least nonsquare in encoding order; the canonical representative of
    /// the nontrivial square class.
    pub fn nonsquare(&self) -> Fe {
        self.0.nonsquare
    }

    /// The class `x` of the modulus variable (the root of the modulus).
    pub fn gen(&self) -> Fe {
        if self.0.k == 1 {
            Fe(0)
        } else {
            Fe(self.0.p)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.q).map(Fe)
    }
    pub fn units(&self) -> impl Iterator<Item = Fe> {
        (1..self.0.q).map(Fe)
    }

    pub fn digits(&self, a: Fe) -> Vec<u32> {
        let p = self.0.p;
        let mut v = a.0;
        (0..self.0.k)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u32]) -> Fe {
        assert!(d.len() <= self.0.k as usize, "too many coordinates for {}", self);
        let p = self.0.p;
        Fe(d.iter().rev().fold(0u32, |acc, &c| acc * p + c % p))
    }

    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn contains(&self, a: Fe) -> bool {
        a.0 < self.0.q
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let p = self.0.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut scale = 1u32;
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * scale;
            x /= p;
            y /= p;
            scale = scale.wrapping_mul(p);
        }
        Fe(out)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.0.p;
        let mut x = a.0;
        let mut out = 0u32;
        let mut scale = 1u32;
        while x > 0 {
            out += ((p - x % p) % p) * scale;
            x /= p;
            scale = scale.wrapping_mul(p);
        }
        Fe(out)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let n = self.0.q - 1;
        let l = (self.0.log[a.0 as usize] as u64 + self.0.log[b.0 as usize] as u64) % n as u64;
        Fe(self.0.exp[l as usize])
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero in {}", self);
        let n = self.0.q - 1;
        let l = self.0.log[a.0 as usize];
        Fe(self.0.exp[((n - l) % n) as usize])
    }

    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let n = (self.0.q - 1) as u64;
        let l = (self.0.log[a.0 as usize] as u64 % n) * (e % n) % n;
        Fe(self.0.exp[l as usize])
    }

    /// `a^(p^i)`.
    pub fn frobenius(&self, a: Fe, i: u32) -> Fe {
        let mut out = a;
        for _ in 0..i {
            out = self.pow(out, self.0.p as u64);
        }
        out
    }

    /// Discrete logarithm to the table generator. `a` must be nonzero.
    pub fn log(&self, a: Fe) -> u32 {
        assert!(!a.is_zero());
        self.0.log[a.0 as usize]
    }

    pub fn exp(&self, i: u64) -> Fe {
        Fe(self.0.exp[(i % (self.0.q as u64 - 1)) as usize])
    }

    /// `true` iff `a` is a nonzero square. Equivalent to `a^((q-1)/2) = 1`.
    pub fn is_square(&self, a: Fe) -> bool {
        !a.is_zero() && self.0.log[a.0 as usize].is_multiple_of(2)
    }

    /// Square class of a nonzero element: `Ok(true)` for squares.
    pub fn square_class(&self, a: Fe) -> Result<bool> {
        if a.is_zero() {
            return Err(Error::ZeroUnit("square_class"));
        }
        Ok(self.is_square(a))
    }

    /// Canonical representative of the square class of a unit: `1` or the
    /// least nonsquare.
    pub fn class_rep(&self, a: Fe) -> Fe {
        if self.is_square(a) {
            Fe::ONE
        } else {
            self.nonsquare()
        }
    }

    pub fn is_prime_field_element(&self, a: Fe) -> bool {
        a.0 < self.0.p
    }

    /// Human-readable element as a polynomial in `x`, e.g. `2*x^2+x+1`.
    pub fn format(&self, a: Fe) -> String {
        let d = self.digits(a);
        let mut parts = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{}", i),
            };
            let sep = if !coeff.is_empty() && !mono.is_empty() { "*" } else { "" };
            parts.push(format!("{}{}{}", coeff, sep, mono));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// Comma-separated coordinate vector, e.g. `[1,1]` for `x+1`.
    pub fn format_coords(&self, a: Fe) -> String {
        let d: Vec<String> = self.digits(a).iter().map(|c| c.to_string()).collect();
        format!("[{}]", d.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_has_modulus_t() {
        let f = make_field(3, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.order(), 3);
        assert_eq!(f.mul(Fe(2), Fe(2)), Fe(1));
    }

    #[test]
    fn f9_modulus_is_t2_plus_1() {
        // Oracle: scan monic quadratics over F_3 for roots.
        let mut first = None;
        'outer: for c1 in 0..3u32 {
            for c0 in 0..3u32 {
                if (0..3u32).all(|r| (r * r + c1 * r + c0) % 3 != 0) {
                    first = Some((c0, c1));
                    break 'outer;
                }
            }
        }
        assert_eq!(first, Some((1, 0)));
        let f = make_field(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(make_field(2, 3).unwrap_err(), Error::CharacteristicTwo);
        assert_eq!(make_field(9, 1).unwrap_err(), Error::NotPrime(9));
        assert_eq!(make_field(3, 0).unwrap_err(), Error::ZeroDegree);
        assert!(matches!(make_field(3, 13), Err(Error::FieldTooLarge { .. })));
        assert!(make_field_bounded(5, 3, 100).is_err());
    }

    #[test]
    fn square_classes_small() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.square_class(Fe(4)), Ok(true));
        assert_eq!(f5.square_class(Fe(2)), Ok(false));
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(f3.square_class(Fe(2)), Ok(false));
        assert!(f3.square_class(Fe(0)).is_err());
    }

    #[test]
    fn square_class_matches_euler_criterion() {
        for (p, k) in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3)] {
            let f = make_field(p, k).unwrap();
            let half = (f.order() as u64 - 1) / 2;
            let squares: std::collections::HashSet<Fe> = f.units().map(|b| f.mul(b, b)).collect();
            for a in f.units() {
                assert_eq!(f.is_square(a), squares.contains(&a));
                assert_eq!(f.is_square(a), f.pow(a, half) == Fe::ONE);
            }
        }
    }

    #[test]
    fn arithmetic_laws_f27() {
        let f = make_field(3, 3).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a)), Fe::ONE);
            }
            for b in f.elements().step_by(5) {
                for c in f.elements().step_by(7) {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn formatting() {
        let f = make_field(3, 2).unwrap();
        let x1 = f.add(f.gen(), Fe::ONE);
        assert_eq!(f.format(x1), "x+1");
        assert_eq!(f.format_coords(x1), "[1,1]");
        // x^2 = -1
        assert_eq!(f.mul(f.gen(), f.gen()), Fe(2));
    }
}
