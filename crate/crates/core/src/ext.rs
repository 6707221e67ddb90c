//! Embeddings between canonical finite fields and monogenic extensions.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::field::{make_field, Fe, FiniteField};
use crate::poly::Poly;

/// A field embedding `src -> dst`, determined by the image of `src.gen()`.
pub struct Embedding {
    src: FiniteField,
    dst: FiniteField,
    image: Vec<Fe>,
    back: HashMap<Fe, Fe>,
}

type Cache<K, V> = Lazy<Mutex<HashMap<K, Arc<V>>>>;

static EMBEDDINGS: Cache<(u32, u32, u32), Embedding> =
    Lazy::new(|| Mutex::new(HashMap::new()));

impl Embedding {
    /// The canonical embedding: `src.gen()` goes to the least root (in
    /// encoding order) of the modulus of `src` in `dst`.
    pub fn canonical(src: &FiniteField, dst: &FiniteField) -> Result<Arc<Embedding>> {
        if src.p() != dst.p() || !dst.degree().is_multiple_of(src.degree()) {
            return Err(Error::FieldMismatch(format!("{} does not embed in {}", src, dst)));
        }
        let key = (src.p(), src.degree(), dst.degree());
        if let Some(e) = EMBEDDINGS.lock().unwrap().get(&key) {
            return Ok(e.clone());
        }
        let gen_image = if src.degree() == 1 {
            Fe::ZERO
        } else {
            // Modulus coefficients lie in the prime field, which shares its encoding.
            let m = Poly::new(src.modulus().iter().map(|&c| Fe(c)).collect());
            m.roots(dst)[0]
        };
        let e = Arc::new(Embedding::with_image(src, dst, gen_image));
        Ok(EMBEDDINGS.lock().unwrap().entry(key).or_insert(e).clone())
    }

    fn with_image(src: &FiniteField, dst: &FiniteField, gen_image: Fe) -> Embedding {
        let powers: Vec<Fe> = (0..src.degree()).map(|j| dst.pow(gen_image, j as u64)).collect();
        let image: Vec<Fe> = src
            .elements()
            .map(|a| {
                src.digits(a)
                    .iter()
                    .zip(&powers)
                    .fold(Fe::ZERO, |acc, (&c, &g)| dst.add(acc, dst.mul(Fe(c), g)))
            })
            .collect();
        let back = image.iter().enumerate().map(|(i, &b)| (b, Fe(i as u32))).collect();
        Embedding { src: src.clone(), dst: dst.clone(), image, back }
    }

    pub fn src(&self) -> &FiniteField {
        &self.src
    }
    pub fn dst(&self) -> &FiniteField {
        &self.dst
    }
    pub fn apply(&self, a: Fe) -> Fe {
        self.image[a.0 as usize]
    }
    pub fn preimage(&self, b: Fe) -> Option<Fe> {
        self.back.get(&b).copied()
    }
    pub fn apply_poly(&self, p: &Poly) -> Poly {
        Poly::new(p.coeffs().iter().map(|&c| self.apply(c)).collect())
    }
}

/// A monogenic extension `top = base(generator)`.
#[derive(Clone)]
pub struct ExtensionDesc {
    base: FiniteField,
    top: FiniteField,
    embed: Arc<Embedding>,
    generator: Fe,
    min_poly: Poly,
    // Inverse of the F_p-matrix whose columns are the coordinates of g^j x^i.
    coord_inv: Arc<Vec<Vec<u32>>>,
}

impl std::fmt::Debug for ExtensionDesc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}/{} by {} (x = {})",
            self.top,
            self.base,
            self.min_poly.format(&self.base, "t"),
            self.top.format(self.generator)
        )
    }
}

static RESIDUE_EXTS: Cache<(u32, u32, Poly), ExtensionDesc> =
    Lazy::new(|| Mutex::new(HashMap::new()));

impl ExtensionDesc {
    /// `base[t]/(f)` realised inside the canonical field of the right size,
    /// with the least root of `f` as generator.
    pub fn from_min_poly(base: &FiniteField, f: &Poly) -> Result<ExtensionDesc> {
        if !f.is_monic() || !f.is_irreducible(base) {
            return Err(Error::Reducible(f.format(base, "t")));
        }
        let d = f.deg() as u32;
        let top = make_field(base.p() as u64, base.degree() * d)?;
        let embed = Embedding::canonical(base, &top)?;
        let generator = embed.apply_poly(f).roots(&top)[0];
        ExtensionDesc::assemble(base.clone(), top, embed, generator, f.clone())
    }

    /// Cached [`ExtensionDesc::from_min_poly`], used for residue fields of closed points.
    pub fn residue_field(base: &FiniteField, f: &Poly) -> Result<Arc<ExtensionDesc>> {
        let key = (base.p(), base.degree(), f.clone());
        if let Some(e) = RESIDUE_EXTS.lock().unwrap().get(&key) {
            return Ok(e.clone());
        }
        let e = Arc::new(ExtensionDesc::from_min_poly(base, f)?);
        Ok(RESIDUE_EXTS.lock().unwrap().entry(key).or_insert(e).clone())
    }

    /// The extension `top/base` generated by `generator`. Fails if the
    /// generator lies in a proper intermediate field.
    pub fn from_generator(base: &FiniteField, top: &FiniteField, generator: Fe) -> Result<ExtensionDesc> {
        let embed = Embedding::canonical(base, top)?;
        let d = (top.degree() / base.degree()) as usize;
        let f = min_poly_over(&embed, generator);
        if f.deg() != d {
            return Err(Error::Semantic(format!(
                "{} generates a degree-{} subextension, not {}/{}",
                top.format(generator),
                f.deg(),
                top,
                base
            )));
        }
        ExtensionDesc::assemble(base.clone(), top.clone(), embed, generator, f)
    }

    /// The trivial extension `base/base`.
    pub fn trivial(base: &FiniteField) -> ExtensionDesc {
        let embed = Embedding::canonical(base, base).expect("identity embedding");
        ExtensionDesc::assemble(base.clone(), base.clone(), embed, Fe::ZERO, Poly::t()).unwrap()
    }

    fn assemble(base: FiniteField, top: FiniteField, embed: Arc<Embedding>, generator: Fe, min_poly: Poly) -> Result<Self> {
        let p = top.p();
        let kb = base.degree() as usize;
        let d = min_poly.deg();
        let n = top.degree() as usize;
        let g_base: Vec<Fe> = (0..kb).map(|j| embed.apply(base.pow(base.gen(), j as u64))).collect();
        let mut cols = Vec::with_capacity(n);
        for i in 0..d {
            let xi = top.pow(generator, i as u64);
            for &g in &g_base {
                cols.push(top.digits(top.mul(g, xi)));
            }
        }
        let m: Vec<Vec<u32>> = (0..n).map(|r| (0..n).map(|c| cols[c][r]).collect()).collect();
        let inv = invert_mod_p(&m, p).ok_or_else(|| Error::Semantic("power basis is not a basis".into()))?;
        Ok(ExtensionDesc { base, top, embed, generator, min_poly, coord_inv: Arc::new(inv) })
    }

    pub fn base(&self) -> &FiniteField {
        &self.base
    }
    pub fn top(&self) -> &FiniteField {
        &self.top
    }
    pub fn embedding(&self) -> &Embedding {
        &self.embed
    }
    pub fn generator(&self) -> Fe {
        self.generator
    }
    pub fn min_poly(&self) -> &Poly {
        &self.min_poly
    }
    pub fn degree(&self) -> usize {
        self.min_poly.deg()
    }

    pub fn embed(&self, c: Fe) -> Fe {
        self.embed.apply(c)
    }

    /// Preimage of an element of `top` lying in the image of `base`.
    pub fn descend(&self, a: Fe) -> Option<Fe> {
        self.embed.preimage(a)
    }

    /// Writes `a` as `sum c_i x^i` with `c_i` in `base`, `i < d`.
    pub fn coordinates(&self, a: Fe) -> Vec<Fe> {
        let p = self.top.p();
        let digits = self.top.digits(a);
        let sol: Vec<u32> = self
            .coord_inv
            .iter()
            .map(|row| (row.iter().zip(&digits).map(|(&x, &y)| x as u64 * y as u64).sum::<u64>() % p as u64) as u32)
            .collect();
        let kb = self.base.degree() as usize;
        sol.chunks(kb).map(|c| self.base.from_digits(c)).collect()
    }

    /// `a` as a polynomial of degree `< d` in the generator.
    pub fn as_poly(&self, a: Fe) -> Poly {
        Poly::new(self.coordinates(a))
    }

    /// Evaluates a polynomial over `base` at the generator.
    pub fn eval(&self, p: &Poly) -> Fe {
        self.embed.apply_poly(p).eval(self.generator, &self.top)
    }

    fn conjugates(&self, a: Fe) -> Vec<Fe> {
        let q = self.base.order() as u64;
        let mut out = Vec::with_capacity(self.degree());
        let mut cur = a;
        for _ in 0..self.degree() {
            out.push(cur);
            cur = self.top.pow(cur, q);
        }
        out
    }

    /// `(N(a), Tr(a))` for `top/base`.
    pub fn norm_and_trace(&self, a: Fe) -> (Fe, Fe) {
        let conj = self.conjugates(a);
        let n = conj.iter().fold(Fe::ONE, |acc, &c| self.top.mul(acc, c));
        let t = conj.iter().fold(Fe::ZERO, |acc, &c| self.top.add(acc, c));
        (
            self.descend(n).expect("norm lies in the base"),
            self.descend(t).expect("trace lies in the base"),
        )
    }

    pub fn norm(&self, a: Fe) -> Fe {
        self.norm_and_trace(a).0
    }
    pub fn trace(&self, a: Fe) -> Fe {
        self.norm_and_trace(a).1
    }

    /// Minimal polynomial of `a` over `base`.
    pub fn min_poly_of(&self, a: Fe) -> Poly {
        min_poly_over(&self.embed, a)
    }

    /// `f'(x)` for the minimal polynomial `f` of the generator.
    pub fn derivative_at_generator(&self) -> Fe {
        self.eval(&self.min_poly.derivative(&self.base))
    }
}

fn min_poly_over(embed: &Embedding, a: Fe) -> Poly {
    let (base, top) = (embed.src(), embed.dst());
    let q = base.order() as u64;
    let mut conj = vec![a];
    loop {
        let next = top.pow(*conj.last().unwrap(), q);
        if next == a {
            break;
        }
        conj.push(next);
    }
    let mut prod = Poly::one();
    for &c in &conj {
        prod = prod.mul(&Poly::linear(top, c), top);
    }
    Poly::new(
        prod.coeffs()
            .iter()
            .map(|&c| embed.preimage(c).expect("conjugate product lies in the base"))
            .collect(),
    )
}

fn invert_mod_p(m: &[Vec<u32>], p: u32) -> Option<Vec<Vec<u32>>> {
    let n = m.len();
    let p64 = p as u64;
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<u64> = row.iter().map(|&x| x as u64).collect();
            r.extend((0..n).map(|j| (i == j) as u64));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        let inv = modpow(a[col][col], p64 - 2, p64);
        for v in a[col].iter_mut() {
            *v = *v * inv % p64;
        }
        let pivot = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            let factor = row[col];
            if r != col && factor != 0 {
                for (v, &w) in row.iter_mut().zip(&pivot) {
                    *v = (*v + p64 * p64 - factor * w) % p64;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].iter().map(|&x| x as u32).collect()).collect())
}

fn modpow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// `F_{q^d} (x) F_{q^r}` splits as `gcd(d, r)` copies of `F_{q^lcm(d, r)}`.
pub fn tensor_split(d: u32, r: u32) -> Vec<(u32, u32)> {
    assert!(d >= 1 && r >= 1);
    vec![(d.lcm(&r), d.gcd(&r))]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> ExtensionDesc {
        let f3 = make_field(3, 1).unwrap();
        ExtensionDesc::from_min_poly(&f3, &Poly::from_ints(&f3, &[1, 0, 1])).unwrap()
    }

    #[test]
    fn f9_generator_norm_trace() {
        let e = f9();
        let x = e.generator();
        assert_eq!(e.norm_and_trace(x), (Fe(1), Fe(0)));
        let x1 = e.top().add(x, Fe::ONE);
        assert_eq!(e.norm_and_trace(x1), (Fe(2), Fe(2)));
    }

    #[test]
    fn min_polys_in_f9() {
        let e = f9();
        let f3 = e.base().clone();
        assert_eq!(e.min_poly_of(e.generator()), Poly::from_ints(&f3, &[1, 0, 1]));
        let x1 = e.top().add(e.generator(), Fe::ONE);
        assert_eq!(e.min_poly_of(x1), Poly::from_ints(&f3, &[2, 1, 1]));
        assert_eq!(e.min_poly_of(Fe(2)), Poly::from_ints(&f3, &[-2, 1]));
    }

    #[test]
    fn trivial_extension_is_identity() {
        let f = make_field(5, 2).unwrap();
        let e = ExtensionDesc::trivial(&f);
        for a in f.units().take(20) {
            assert_eq!(e.norm_and_trace(a), (a, a));
            assert_eq!(e.coordinates(a), vec![a]);
        }
    }

    #[test]
    fn coordinates_round_trip_in_towers() {
        let f9 = make_field(3, 2).unwrap();
        let f81 = make_field(3, 4).unwrap();
        let g = f81.units().find(|&a| ExtensionDesc::from_generator(&f9, &f81, a).is_ok()).unwrap();
        let e = ExtensionDesc::from_generator(&f9, &f81, g).unwrap();
        assert_eq!(e.degree(), 2);
        for a in f81.elements() {
            assert_eq!(e.eval(&e.as_poly(a)), a);
        }
        assert!(e.eval(e.min_poly()).is_zero());
    }

    #[test]
    fn norm_of_generator_is_signed_constant_term() {
        for (p, kb, d) in [(3, 1, 2), (3, 1, 3), (5, 1, 2), (3, 2, 2), (5, 1, 3), (7, 1, 2)] {
            let base = make_field(p, kb).unwrap();
            let top = make_field(p, kb * d).unwrap();
            for g in top.units().step_by(7).take(30) {
                if let Ok(e) = ExtensionDesc::from_generator(&base, &top, g) {
                    let c0 = e.min_poly().coeff(0);
                    let expect = if d % 2 == 0 { c0 } else { base.neg(c0) };
                    assert_eq!(e.norm(g), expect);
                }
            }
        }
    }

    #[test]
    fn tensor_split_matches_factor_count() {
        for (d, r) in [(2, 3), (2, 2), (1, 3), (3, 3), (4, 2)] {
            let split = tensor_split(d, r);
            // Oracle: factor a degree-d irreducible over F_{3^r}.
            let top = make_field(3, d).unwrap();
            let modulus = Poly::new(top.modulus().iter().map(|&c| Fe(c)).collect());
            let fr = make_field(3, r).unwrap();
            let fa = modulus.factor(&fr).unwrap();
            assert_eq!(split[0].1 as usize, fa.factors.len());
            for (g, m) in &fa.factors {
                assert_eq!(*m, 1);
                assert_eq!(split[0].0, g.deg() as u32 * r);
            }
            assert_eq!(split[0].0 * split[0].1 / d, r);
        }
    }
}
