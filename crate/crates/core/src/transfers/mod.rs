//! Bass-Tate transfers along finite extensions of finite fields.
//!
//! For a closed point `x` of `A^1_E` with minimal polynomial `f`, the
//! transfer `Tr_x : K^MW_n(kappa(x)) -> K^MW_n(E)` is determined by
//! `sum_y Tr_y d_y(gamma) + d_inf(gamma) = 0` for every `gamma` in
//! `K^MW_{n+1}(E(t))`. Given `beta`, we pick `gamma` with `d_x(gamma) = beta`
//! whose other residues sit at points of smaller degree, and recurse.

mod decompose;
mod tower;

pub use decompose::{bt_decompose, recompose, DecompTerm};
pub use tower::{transfer_tower, transition_unit, Tower};

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ext::ExtensionDesc;
use crate::field::FiniteField;
use crate::kmw::{ClassKey, ClosedPoint, KmwFq, KmwFt, RatFn, Term};
use crate::poly::Poly;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TransferMode {
    /// The raw transfer attached to the chosen generator.
    Bt,
    /// `Bt` precomposed with multiplication by `<f'(x)>`.
    Geo,
}

impl std::str::FromStr for TransferMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bt" => Ok(TransferMode::Bt),
            "geo" => Ok(TransferMode::Geo),
            _ => Err(Error::InvalidParam(format!("unknown transfer mode `{s}`"))),
        }
    }
}

/// How the element `gamma` over `E(t)` is built from `beta`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Lift {
    /// Entries replaced by their coordinate polynomials of degree `< d`.
    Coordinates,
    /// Built from the output of [`bt_decompose`].
    Decomposition,
}

type MemoKey = (u32, u32, Poly, i64, ClassKey);

/// Transfer evaluator with a memo table of already computed point transfers.
#[derive(Default)]
pub struct Transferer {
    memo: HashMap<MemoKey, KmwFq>,
}

impl Transferer {
    pub fn new() -> Self {
        Self::default()
    }

    /// `Tr_x(beta)` for the closed point `f` of `A^1_base`, with `beta` over `kappa(x)`.
    pub fn at_point(&mut self, base: &FiniteField, f: &Poly, beta: &KmwFq) -> Result<KmwFq> {
        let kext = ExtensionDesc::residue_field(base, f)?;
        if beta.field() != kext.top() {
            return Err(Error::FieldMismatch(format!("{} vs {}", beta.field(), kext.top())));
        }
        if f.deg() == 1 {
            return Ok(beta.clone());
        }
        let beta = beta.canonical();
        if beta.terms().is_empty() {
            return Ok(KmwFq::zero(base, beta.degree()));
        }
        let key = (base.p(), base.degree(), f.clone(), beta.degree(), beta.key());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let gamma = coordinate_lift(base, &kext, &beta)?;
        let out = self.close_up(base, f, &gamma)?.canonical();
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    /// `-d_inf(gamma) - sum_{y != x} Tr_y(d_y gamma)`.
    fn close_up(&mut self, base: &FiniteField, f: &Poly, gamma: &KmwFt) -> Result<KmwFq> {
        let mut acc = gamma.residue(&ClosedPoint::Infinity)?.neg();
        for y in gamma.support() {
            let ClosedPoint::Finite(g) = &y else { unreachable!() };
            if g == f {
                continue;
            }
            let r = gamma.residue(&y)?;
            if r.is_zero() {
                continue;
            }
            acc = acc.sub(&self.at_point(base, g, &r)?)?;
        }
        Ok(acc)
    }

    /// Raw transfer along `ext`, using the generator of `ext`.
    pub fn bt(&mut self, ext: &ExtensionDesc, beta: &KmwFq) -> Result<KmwFq> {
        self.bt_with_lift(ext, beta, Lift::Coordinates)
    }

    pub fn bt_with_lift(&mut self, ext: &ExtensionDesc, beta: &KmwFq, lift: Lift) -> Result<KmwFq> {
        if beta.field() != ext.top() {
            return Err(Error::FieldMismatch(format!("{} vs {}", beta.field(), ext.top())));
        }
        let base = ext.base();
        let f = ext.min_poly();
        if ext.degree() == 1 {
            return descend(ext, beta);
        }
        match lift {
            Lift::Coordinates => {
                let kext = ExtensionDesc::residue_field(base, f)?;
                self.at_point(base, f, &transport(ext, &kext, beta)?)
            }
            Lift::Decomposition => {
                let pieces = bt_decompose(ext, beta)?;
                let ff = RatFn::from_poly(base, f)?;
                let mut gamma = KmwFt::zero(base, beta.degree() + 1);
                for piece in &pieces {
                    let entries: Vec<RatFn> = piece.polys.iter().map(|p| RatFn::from_poly(base, p)).collect::<Result<_>>()?;
                    let tail = KmwFt::from_constant(&piece.alpha).mul(&KmwFt::symbol(base, piece.eta, &entries))?;
                    gamma = gamma.add(&tail.symbol_mul(&ff))?;
                }
                self.close_up(base, f, &gamma)
            }
        }
    }

    /// `Tr(<f'(x)> beta)`.
    pub fn geo(&mut self, ext: &ExtensionDesc, beta: &KmwFq) -> Result<KmwFq> {
        let twisted = beta.angle_mul(ext.derivative_at_generator())?;
        self.bt(ext, &twisted)
    }

    pub fn transfer(&mut self, ext: &ExtensionDesc, beta: &KmwFq, mode: TransferMode) -> Result<KmwFq> {
        match mode {
            TransferMode::Bt => self.bt(ext, beta),
            TransferMode::Geo => self.geo(ext, beta),
        }
    }
}

/// `gamma = sum c eta^m [f(t), q_1(t), ..., q_k(t)]` with `q_i` the coordinate
/// polynomials of the entries of `beta`.
fn coordinate_lift(base: &FiniteField, kext: &ExtensionDesc, beta: &KmwFq) -> Result<KmwFt> {
    let ff = RatFn::from_poly(base, kext.min_poly())?;
    let terms = beta
        .terms()
        .iter()
        .map(|t| {
            let mut entries = vec![ff.clone()];
            for &b in &t.entries {
                entries.push(RatFn::from_poly(base, &kext.as_poly(b))?);
            }
            Ok(Term { coeff: t.coeff, eta: t.eta, entries })
        })
        .collect::<Result<Vec<_>>>()?;
    KmwFt::from_terms(base, beta.degree() + 1, terms)
}

/// Moves `beta` from `ext.top()` to `kext.top()` along generator -> generator.
fn transport(ext: &ExtensionDesc, kext: &ExtensionDesc, beta: &KmwFq) -> Result<KmwFq> {
    let terms = beta
        .terms()
        .iter()
        .map(|t| Term { entries: t.entries.iter().map(|&b| kext.eval(&ext.as_poly(b))).collect(), ..t.clone() })
        .collect();
    KmwFq::from_terms(kext.top(), beta.degree(), terms)
}

fn descend(ext: &ExtensionDesc, beta: &KmwFq) -> Result<KmwFq> {
    let terms = beta
        .terms()
        .iter()
        .map(|t| Term { entries: t.entries.iter().map(|&b| ext.coordinates(b)[0]).collect(), ..t.clone() })
        .collect();
    KmwFq::from_terms(ext.base(), beta.degree(), terms)
}

pub fn transfer_bt(ext: &ExtensionDesc, beta: &KmwFq) -> Result<KmwFq> {
    Transferer::new().bt(ext, beta)
}

pub fn transfer_geo(ext: &ExtensionDesc, beta: &KmwFq) -> Result<KmwFq> {
    Transferer::new().geo(ext, beta)
}

/// `Tr_x` for a closed point of `A^1_base`, `beta` over `kappa(x)`.
pub fn transfer_at_point(base: &FiniteField, x: &ClosedPoint, beta: &KmwFq) -> Result<KmwFq> {
    match x {
        ClosedPoint::Finite(f) => Transferer::new().at_point(base, f, beta),
        ClosedPoint::Infinity => Ok(beta.clone()),
    }
}

/// `sum_x Tr_x d_x(gamma) + d_inf(gamma)`, which vanishes identically.
pub fn characterization_defect(gamma: &KmwFt) -> Result<KmwFq> {
    let base = gamma.field().clone();
    let mut tr = Transferer::new();
    let mut acc = gamma.residue(&ClosedPoint::Infinity)?;
    for x in gamma.support() {
        let ClosedPoint::Finite(f) = &x else { unreachable!() };
        let r = gamma.residue(&x)?;
        acc = acc.add(&tr.at_point(&base, f, &r)?)?;
    }
    Ok(acc)
}
