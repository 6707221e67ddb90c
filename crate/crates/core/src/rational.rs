//! Square classes and local invariants over the rationals.

use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Q = Ratio<i128>;

/// Class of a nonzero rational in `Q^x / (Q^x)^2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct RatSquareClass {
    pub sign: i8,
    pub squarefree: u64,
}

impl RatSquareClass {
    pub fn of_int(n: i128) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroUnit("rational square class"));
        }
        Ok(RatSquareClass { sign: if n < 0 { -1 } else { 1 }, squarefree: squarefree_kernel(n.unsigned_abs()) })
    }

    pub fn of(a: &Q) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroUnit("rational square class"));
        }
        let sign = if a.is_negative() { -1 } else { 1 };
        let n = squarefree_kernel(a.numer().unsigned_abs());
        let d = squarefree_kernel(a.denom().unsigned_abs());
        Ok(RatSquareClass { sign, squarefree: squarefree_kernel(n as u128 * d as u128) })
    }

    /// The signed squarefree integer representing the class.
    pub fn rep(self) -> i64 {
        self.sign as i64 * self.squarefree as i64
    }
}

impl std::ops::Mul for RatSquareClass {
    type Output = Self;
    fn mul(self, other: Self) -> Self {
        RatSquareClass {
            sign: self.sign * other.sign,
            squarefree: squarefree_kernel(self.squarefree as u128 * other.squarefree as u128),
        }
    }
}

impl fmt::Display for RatSquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep())
    }
}

/// Product of the primes dividing `n` to an odd power.
pub fn squarefree_kernel(mut n: u128) -> u64 {
    let mut out: u128 = 1;
    let mut d: u128 = 2;
    while d * d <= n {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e % 2 == 1 {
            out *= d;
        }
        d += 1;
    }
    (out * n) as u64
}

pub fn prime_divisors(mut n: u64) -> Vec<u64> {
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

fn legendre(a: i64, p: u64) -> i8 {
    let a = a.rem_euclid(p as i64) as u64;
    let mut r = 1u64;
    let mut b = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// A place of `Q`: a prime or the real place.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Place {
    Prime(u64),
    Infinity,
}

/// Hilbert symbol `(a, b)_v` of two nonzero integers.
pub fn hilbert_symbol(a: i64, b: i64, v: Place) -> i8 {
    assert!(a != 0 && b != 0);
    match v {
        Place::Infinity => {
            if a < 0 && b < 0 {
                -1
            } else {
                1
            }
        }
        Place::Prime(p) => {
            let split = |mut x: i64| {
                let mut e = 0u32;
                while x % p as i64 == 0 {
                    x /= p as i64;
                    e += 1;
                }
                (e, x)
            };
            let (alpha, u) = split(a);
            let (beta, w) = split(b);
            if p == 2 {
                let eps = |x: i64| ((x.rem_euclid(4) - 1) / 2) as u32 % 2;
                let omega = |x: i64| {
                    let m = x.rem_euclid(8);
                    ((m * m - 1) / 8) as u32 % 2
                };
                let e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u);
                if e % 2 == 0 {
                    1
                } else {
                    -1
                }
            } else {
                let eps_p = ((p - 1) / 2) as u32;
                let mut s: i8 = if (alpha * beta * eps_p).is_multiple_of(2) { 1 } else { -1 };
                if beta % 2 == 1 {
                    s *= legendre(u, p);
                }
                if alpha % 2 == 1 {
                    s *= legendre(w, p);
                }
                s
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_class_of_rationals() {
        let c = RatSquareClass::of(&Q::new(-12, 5)).unwrap();
        assert_eq!(c.rep(), -15);
        assert_eq!(RatSquareClass::of_int(18).unwrap().rep(), 2);
        assert!(RatSquareClass::of_int(0).is_err());
    }

    /// Brute-force oracle: (a,b)_p = 1 iff a x^2 + b y^2 = z^2 has a primitive
    /// solution mod p^2 (p odd) / mod 2^5 (p = 2), sufficient for squarefree inputs.
    fn hilbert_brute(a: i64, b: i64, p: u64) -> i8 {
        let m: i64 = if p == 2 { 32 } else { (p * p) as i64 };
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    let primitive = [x, y, z].iter().any(|&v| v % p as i64 != 0);
                    if primitive && (a * x * x + b * y * y - z * z).rem_euclid(m) == 0 {
                        return 1;
                    }
                }
            }
        }
        -1
    }

    #[test]
    fn hilbert_symbols_agree_with_brute_force() {
        let vals = [-6i64, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10];
        for p in [2u64, 3, 5] {
            for &a in &vals {
                for &b in &vals {
                    assert_eq!(hilbert_symbol(a, b, Place::Prime(p)), hilbert_brute(a, b, p), "({a},{b})_{p}");
                }
            }
        }
    }

    #[test]
    fn product_formula() {
        let vals = [-7i64, -5, -2, -1, 2, 3, 6, 10, 15];
        for &a in &vals {
            for &b in &vals {
                let mut primes = vec![2u64];
                for x in [a, b] {
                    primes.extend(prime_divisors(x.unsigned_abs()));
                }
                primes.sort();
                primes.dedup();
                let prod: i8 = primes.iter().map(|&p| hilbert_symbol(a, b, Place::Prime(p))).product::<i8>()
                    * hilbert_symbol(a, b, Place::Infinity);
                assert_eq!(prod, 1);
            }
        }
    }
}
