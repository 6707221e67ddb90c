//! Symmetric Gram matrices: congruence diagonalisation and Scharlau transfers
//! along finite extensions, with `F_q` and `Q` as base fields.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ext::ExtensionDesc;
use crate::field::{Fe, FiniteField};
use crate::gw::{GwElement, GwField};
use crate::rational::Q;

trait Scalars {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn div(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool {
        *a == self.zero()
    }
}

impl Scalars for FiniteField {
    type E = Fe;
    fn zero(&self) -> Fe {
        Fe::ZERO
    }
    fn add(&self, a: &Fe, b: &Fe) -> Fe {
        FiniteField::add(self, *a, *b)
    }
    fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        FiniteField::sub(self, *a, *b)
    }
    fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        FiniteField::mul(self, *a, *b)
    }
    fn div(&self, a: &Fe, b: &Fe) -> Fe {
        FiniteField::div(self, *a, *b)
    }
}

struct Rationals;

impl Scalars for Rationals {
    type E = Q;
    fn zero(&self) -> Q {
        Q::zero()
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a + b
    }
    fn sub(&self, a: &Q, b: &Q) -> Q {
        a - b
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a * b
    }
    fn div(&self, a: &Q, b: &Q) -> Q {
        a / b
    }
}

/// Row and column operation `e_i <- e_i + c e_j`.
fn add_multiple<S: Scalars>(s: &S, m: &mut [Vec<S::E>], i: usize, j: usize, c: &S::E) {
    let row_j = m[j].clone();
    for (x, y) in m[i].iter_mut().zip(&row_j) {
        *x = s.add(x, &s.mul(c, y));
    }
    for row in m.iter_mut() {
        row[i] = s.add(&row[i], &s.mul(c, &row[j]));
    }
}

fn swap<S: Scalars>(m: &mut [Vec<S::E>], i: usize, j: usize) {
    m.swap(i, j);
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

fn diagonalize<S: Scalars>(s: &S, mut m: Vec<Vec<S::E>>) -> Result<Vec<S::E>> {
    let n = m.len();
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidParam("Gram matrix is not square".into()));
        }
        for j in 0..i {
            if row[j] != m[j][i] {
                return Err(Error::InvalidParam("Gram matrix is not symmetric".into()));
            }
        }
    }
    for k in 0..n {
        if let Some(i) = (k..n).find(|&i| !s.is_zero(&m[i][i])) {
            swap::<S>(&mut m, k, i);
        } else {
            // All remaining diagonal entries vanish: e_i + e_j has value 2 m_ij.
            let (i, j) = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !s.is_zero(&m[i][j]))
                .ok_or(Error::Degenerate)?;
            let one = s.div(&m[i][j], &m[i][j]);
            add_multiple(s, &mut m, i, j, &one);
            swap::<S>(&mut m, k, i);
        }
        for r in k + 1..n {
            if !s.is_zero(&m[r][k]) {
                let c = s.sub(&s.zero(), &s.div(&m[r][k], &m[k][k]));
                add_multiple(s, &mut m, r, k, &c);
            }
        }
    }
    Ok((0..n).map(|i| m[i][i].clone()).collect())
}

/// Diagonal entries of a diagonal matrix congruent to `m` over `F_q`.
pub fn diagonalize_gram_fq(field: &FiniteField, m: &[Vec<Fe>]) -> Result<Vec<Fe>> {
    diagonalize(field, m.to_vec())
}

/// Diagonal entries of a diagonal matrix congruent to `m` over `Q`.
pub fn diagonalize_gram_q(m: &[Vec<Q>]) -> Result<Vec<Q>> {
    diagonalize(&Rationals, m.to_vec())
}

pub fn gram_class_fq(field: &FiniteField, m: &[Vec<Fe>]) -> Result<GwElement> {
    GwElement::from_diagonal(field, &diagonalize_gram_fq(field, m)?)
}

pub fn gram_class_q(m: &[Vec<Q>]) -> Result<GwElement> {
    GwElement::from_rational_diagonal(&diagonalize_gram_q(m)?)
}

/// A base-linear functional `s : F -> E` used to push forms down a finite
/// extension `F = E(x)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScharlauFunctional {
    /// The field trace.
    Trace,
    /// The `i`-th coordinate in the power basis `1, x, ..., x^{d-1}`.
    Coefficient(usize),
}

fn check_functional(s: ScharlauFunctional, d: usize) -> Result<()> {
    match s {
        ScharlauFunctional::Coefficient(i) if i >= d => {
            Err(Error::InvalidParam(format!("coefficient index {i} out of range for degree {d}")))
        }
        _ => Ok(()),
    }
}

fn apply_functional_fq(ext: &ExtensionDesc, s: ScharlauFunctional, a: Fe) -> Fe {
    match s {
        ScharlauFunctional::Trace => ext.trace(a),
        ScharlauFunctional::Coefficient(i) => ext.coordinates(a)[i],
    }
}

/// `s_*(sum c_b <b>)`: the class of `(u, v) -> s(b u v)` on `F` viewed over `E`.
pub fn scharlau_transfer(ext: &ExtensionDesc, e: &GwElement, s: ScharlauFunctional) -> Result<GwElement> {
    if *e.field() != GwField::Finite(ext.top().clone()) {
        return Err(Error::FieldMismatch(format!("{} vs {}", e.field(), ext.top())));
    }
    let d = ext.degree();
    check_functional(s, d)?;
    let top = ext.top();
    let base = ext.base();
    let powers: Vec<Fe> = (0..2 * d).map(|k| top.pow(ext.generator(), k as u64)).collect();
    let mut out = GwElement::zero(&GwField::Finite(base.clone()));
    for (&rep, &c) in e.terms() {
        let b = Fe(rep as u32);
        let values: Vec<Fe> = powers.iter().map(|&xk| apply_functional_fq(ext, s, top.mul(b, xk))).collect();
        let gram: Vec<Vec<Fe>> = (0..d).map(|i| (0..d).map(|j| values[i + j]).collect()).collect();
        out = out.add(&gram_class_fq(base, &gram)?.scale(c))?;
    }
    Ok(out)
}

pub fn trace_form_transfer(ext: &ExtensionDesc, e: &GwElement) -> Result<GwElement> {
    scharlau_transfer(ext, e, ScharlauFunctional::Trace)
}

/// `Q[t]/(f)` for a monic `f`, elements written in the power basis.
#[derive(Clone, Debug)]
pub struct RationalExtension {
    min_poly: Vec<Q>,
}

impl RationalExtension {
    /// `coeffs` low to high, monic of degree at least 1.
    pub fn new(coeffs: Vec<Q>) -> Result<Self> {
        match coeffs.last() {
            Some(c) if c.is_one() && coeffs.len() >= 2 => Ok(RationalExtension { min_poly: coeffs }),
            _ => Err(Error::InvalidParam("minimal polynomial must be monic of positive degree".into())),
        }
    }

    pub fn from_ints(coeffs: &[i64]) -> Result<Self> {
        RationalExtension::new(coeffs.iter().map(|&c| Q::from(c as i128)).collect())
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    /// The class of `x` itself.
    pub fn generator(&self) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.degree()];
        if self.degree() > 1 {
            v[1] = Q::one();
        } else {
            v[0] = -self.min_poly[0];
        }
        v
    }

    pub fn one(&self) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.degree()];
        v[0] = Q::one();
        v
    }

    /// Product reduced modulo the minimal polynomial.
    pub fn mul(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let d = self.degree();
        let mut prod = vec![Q::zero(); 2 * d];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        for k in (d..prod.len()).rev() {
            let c = prod[k];
            if !c.is_zero() {
                for (i, m) in self.min_poly[..d].iter().enumerate() {
                    prod[k - d + i] -= c * m;
                }
                prod[k] = Q::zero();
            }
        }
        prod.truncate(d);
        prod
    }

    /// Matrix of multiplication by `a`, columns indexed by the power basis.
    fn mult_matrix(&self, a: &[Q]) -> Vec<Vec<Q>> {
        let d = self.degree();
        let cols: Vec<Vec<Q>> = (0..d)
            .map(|j| {
                let mut e = vec![Q::zero(); d];
                e[j] = Q::one();
                self.mul(a, &e)
            })
            .collect();
        (0..d).map(|r| (0..d).map(|c| cols[c][r]).collect()).collect()
    }

    pub fn trace(&self, a: &[Q]) -> Q {
        let m = self.mult_matrix(a);
        (0..self.degree()).map(|i| m[i][i]).sum()
    }

    pub fn norm(&self, a: &[Q]) -> Q {
        determinant(self.mult_matrix(a))
    }

    fn apply(&self, s: ScharlauFunctional, a: &[Q]) -> Q {
        match s {
            ScharlauFunctional::Trace => self.trace(a),
            ScharlauFunctional::Coefficient(i) => a[i],
        }
    }

    /// `s_*(sum <b_i>)` over `Q`.
    pub fn scharlau_transfer(&self, units: &[Vec<Q>], s: ScharlauFunctional) -> Result<GwElement> {
        let d = self.degree();
        check_functional(s, d)?;
        let mut powers = vec![self.one()];
        for _ in 1..2 * d {
            let next = self.mul(powers.last().unwrap(), &self.generator());
            powers.push(next);
        }
        let mut out = GwElement::zero(&GwField::Rationals);
        for b in units {
            if b.len() != d {
                return Err(Error::InvalidParam(format!("expected {d} coordinates")));
            }
            let values: Vec<Q> = powers.iter().map(|xk| self.apply(s, &self.mul(b, xk))).collect();
            let gram: Vec<Vec<Q>> = (0..d).map(|i| (0..d).map(|j| values[i + j]).collect()).collect();
            out = out.add(&gram_class_q(&gram)?)?;
        }
        Ok(out)
    }

    pub fn trace_form_transfer(&self, units: &[Vec<Q>]) -> Result<GwElement> {
        self.scharlau_transfer(units, ScharlauFunctional::Trace)
    }
}

fn determinant(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut det = Q::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return Q::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= m[k][k];
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot = &top[k];
        for row in rest.iter_mut() {
            let f = row[k] / pivot[k];
            for (x, y) in row[k..].iter_mut().zip(&pivot[k..]) {
                *x -= f * *y;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::poly::Poly;
    use proptest::prelude::*;

    fn fq(f: &FiniteField, rows: &[&[i64]]) -> Vec<Vec<Fe>> {
        rows.iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect()
    }

    #[test]
    fn gram_examples() {
        let f3 = make_field(3, 1).unwrap();
        let h = gram_class_fq(&f3, &fq(&f3, &[&[0, 1], &[1, 0]])).unwrap();
        assert!(h.equals(&GwElement::hyperbolic(&GwField::Finite(f3.clone()))).unwrap());
        let f5 = make_field(5, 1).unwrap();
        let d = diagonalize_gram_fq(&f5, &fq(&f5, &[&[2, 0], &[0, 1]])).unwrap();
        assert_eq!(d, vec![f5.from_int(2), f5.from_int(1)]);
        let g = gram_class_fq(&f5, &fq(&f5, &[&[2, 1], &[1, 2]])).unwrap();
        assert_eq!((g.rank(), g.disc()), (2, f5.class_rep(f5.from_int(3)).0 as i64));
        assert_eq!(diagonalize_gram_fq(&f5, &fq(&f5, &[&[1, 2], &[2, 4]])), Err(Error::Degenerate));
        assert!(diagonalize_gram_fq(&f5, &fq(&f5, &[&[1, 2], &[3, 4]])).is_err());
    }

    /// Number of isotropic vectors is a congruence invariant.
    fn isotropic_count(f: &FiniteField, m: &[Vec<Fe>]) -> usize {
        let n = m.len();
        let q = f.order() as usize;
        (0..q.pow(n as u32))
            .filter(|&code| {
                let v: Vec<Fe> = (0..n).map(|i| Fe((code / q.pow(i as u32) % q) as u32)).collect();
                let mut s = Fe::ZERO;
                for i in 0..n {
                    for j in 0..n {
                        s = f.add(s, f.mul(v[i], f.mul(m[i][j], v[j])));
                    }
                }
                s.is_zero()
            })
            .count()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn diagonalization_is_a_congruence(p in prop::sample::select(vec![3u64, 5, 7]), raw in prop::collection::vec(0i64..7, 6)) {
            let f = make_field(p, 1).unwrap();
            let e = |i: usize| f.from_int(raw[i]);
            let m = vec![vec![e(0), e(1), e(2)], vec![e(1), e(3), e(4)], vec![e(2), e(4), e(5)]];
            match diagonalize_gram_fq(&f, &m) {
                Ok(d) => {
                    let dm: Vec<Vec<Fe>> = (0..3).map(|i| (0..3).map(|j| if i == j { d[i] } else { Fe::ZERO }).collect()).collect();
                    prop_assert_eq!(isotropic_count(&f, &m), isotropic_count(&f, &dm));
                }
                Err(Error::Degenerate) => {
                    let det = f.sub(
                        f.add(f.mul(m[0][0], f.sub(f.mul(m[1][1], m[2][2]), f.mul(m[1][2], m[2][1]))),
                              f.mul(m[0][2], f.sub(f.mul(m[1][0], m[2][1]), f.mul(m[1][1], m[2][0])))),
                        f.mul(m[0][1], f.sub(f.mul(m[1][0], m[2][2]), f.mul(m[1][2], m[2][0]))));
                    prop_assert!(det.is_zero());
                }
                Err(e) => prop_assert!(false, "{e}"),
            }
        }

        #[test]
        fn rational_diagonalization_preserves_determinant_class(raw in prop::collection::vec(-6i64..7, 6)) {
            let e = |i: usize| Q::from(raw[i] as i128);
            let m = vec![vec![e(0), e(1), e(2)], vec![e(1), e(3), e(4)], vec![e(2), e(4), e(5)]];
            let det = determinant(m.clone());
            match diagonalize_gram_q(&m) {
                Ok(d) => {
                    let prod: Q = d.iter().product();
                    prop_assert!(!det.is_zero());
                    let ratio = crate::rational::RatSquareClass::of(&(prod / det)).unwrap();
                    prop_assert_eq!(ratio.rep(), 1);
                }
                Err(_) => prop_assert!(det.is_zero()),
            }
        }
    }

    #[test]
    fn trace_form_examples() {
        let f3 = make_field(3, 1).unwrap();
        let ext = ExtensionDesc::from_min_poly(&f3, &Poly::from_ints(&f3, &[1, 0, 1])).unwrap();
        let one = GwElement::one(&GwField::Finite(ext.top().clone()));
        let tr = trace_form_transfer(&ext, &one).unwrap();
        assert!(tr.equals(&GwElement::hyperbolic(&GwField::Finite(f3.clone()))).unwrap());

        let f5 = make_field(5, 1).unwrap();
        let ext = ExtensionDesc::from_min_poly(&f5, &Poly::from_ints(&f5, &[-2, 0, 1])).unwrap();
        let one = GwElement::one(&GwField::Finite(ext.top().clone()));
        let tr = trace_form_transfer(&ext, &one).unwrap();
        let expect = GwElement::from_diagonal(&f5, &[f5.from_int(1), f5.from_int(2)]).unwrap();
        assert!(tr.equals(&expect).unwrap());

        let sqrt2 = RationalExtension::from_ints(&[-2, 0, 1]).unwrap();
        let tr = sqrt2.trace_form_transfer(&[sqrt2.one()]).unwrap();
        let expect = GwElement::from_rational_diagonal(&[Q::from(1), Q::from(2)]).unwrap();
        assert!(tr.equals(&expect).unwrap());
        assert_eq!(sqrt2.norm(&sqrt2.generator()), Q::from(-2));
    }

    #[test]
    fn trace_form_rank_equals_degree() {
        for (p, k) in [(3u64, 1u32), (5, 1), (3, 2)] {
            let base = make_field(p, k).unwrap();
            for d in 1..=4usize {
                if (base.order() as u64).pow(d as u32) > 1_000_000 {
                    continue;
                }
                let f = (0..base.order().pow(d as u32))
                    .map(|code| {
                        let mut c: Vec<Fe> = (0..d).map(|i| Fe(code / base.order().pow(i as u32) % base.order())).collect();
                        c.push(Fe::ONE);
                        Poly::new(c)
                    })
                    .find(|f| f.is_irreducible(&base))
                    .unwrap();
                let ext = ExtensionDesc::from_min_poly(&base, &f).unwrap();
                let one = GwElement::one(&GwField::Finite(ext.top().clone()));
                assert_eq!(trace_form_transfer(&ext, &one).unwrap().rank(), d as i64);
                for i in 0..d {
                    let s = scharlau_transfer(&ext, &one, ScharlauFunctional::Coefficient(i)).unwrap();
                    assert_eq!(s.rank(), d as i64);
                }
            }
        }
    }

    #[test]
    fn rational_norms_and_traces() {
        let cube = RationalExtension::from_ints(&[-2, 0, 0, 1]).unwrap();
        let x = cube.generator();
        assert_eq!(cube.norm(&x), Q::from(2));
        assert_eq!(cube.trace(&x), Q::from(0));
        assert_eq!(cube.trace(&cube.one()), Q::from(3));
        assert_eq!(cube.mul(&cube.mul(&x, &x), &x), vec![Q::from(2), Q::from(0), Q::from(0)]);
    }
}
