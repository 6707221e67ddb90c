//! A small expression language over the objects of this crate.
//!
//! ```text
//! n_eps(GF(3), 2)
//! transfer(geo, GF(9)/GF(3) by t^2+1, gw<1>)
//! residue(t, [t,2] over GF(3)(t))
//! res(transfer(bt, GF(3) -> t^2+1 -> t^3+t+x, 1 + eta*[x]), GF(9))
//! ```
//!
//! Literals (`3`, `eta`, `h`, `[a,b]`, `gw<a,b>`) take their field from an
//! enclosing `over GF(q)`, `over GF(q)(t)` or `over Q`, from the other operand
//! of an arithmetic operator, or from the top field of an enclosing
//! `transfer`/`decompose`. Inside field elements `x` is the generator of the
//! canonical model of the field and `t` is the function-field variable.

mod alg;
mod parse;

use std::fmt::Write as _;

use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::ext::{Embedding, ExtensionDesc};
use crate::field::{field_of_order, FiniteField};
use crate::gram::{RationalExtension, ScharlauFunctional};
use crate::gw::{GwElement, GwField, GwInvariants, WittElement};
use crate::kmw::{equal_ft, ClosedPoint, KmwClass, KmwFq, KmwFt};
use crate::rational::Q;
use crate::transfers::{bt_decompose, characterization_defect, transition_unit, DecompTerm, Tower, TransferMode, Transferer};

use alg::{Frac, QExt, QPoly};
use parse::{Domain, Elem, ExtSpec, FieldSpec, Node, Point};

/// Result of evaluating an expression.
#[derive(Clone, Debug)]
pub enum Value {
    Kmw(KmwFq),
    KmwFt(KmwFt),
    /// A Grothendieck-Witt class over `Q`.
    GwQ(GwElement),
    Witt(WittElement),
    Bool(bool),
    Element { field: String, value: String },
    Poly { field: String, value: String },
    Factorization { field: String, lc: String, factors: Vec<(String, u32)> },
    Decomposition { base: FiniteField, terms: Vec<DecompTerm> },
}

pub fn eval_expr(src: &str) -> Result<Value> {
    let node = parse::parse(src)?;
    Evaluator::default().eval(&node, &Hint::None)
}

fn invariants_text(inv: &GwInvariants) -> String {
    let mut s = format!("rank {}, disc {}", inv.rank, inv.disc);
    if let Some(sig) = inv.signature {
        write!(s, ", signature {sig}").unwrap();
    }
    if let Some(h) = &inv.hasse {
        let bad: Vec<String> = h.iter().filter(|(_, &v)| v < 0).map(|(p, _)| p.to_string()).collect();
        if !bad.is_empty() {
            write!(s, ", hasse -1 at {}", bad.join(",")).unwrap();
        }
    }
    s
}

fn hyperbolic_suffix(g: &GwElement) -> &'static str {
    match g.equals(&GwElement::hyperbolic(g.field())) {
        Ok(true) => " = h",
        _ => "",
    }
}

fn decomposition_terms(base: &FiniteField, terms: &[DecompTerm]) -> Vec<(String, u32, Vec<String>)> {
    terms.iter().map(|t| (t.alpha.canonical().serialize(), t.eta, t.polys.iter().map(|p| p.format(base, "t")).collect())).collect()
}

impl Value {
    pub fn to_json(&self) -> Json {
        match self {
            Value::Kmw(x) => {
                let c = x.canonical();
                json!({"type": "kmw", "field": x.field().to_string(), "degree": x.degree(), "value": c.serialize(), "class": x.class().to_json(x.field())})
            }
            Value::KmwFt(g) => json!({"type": "kmw_ft", "field": format!("{}(t)", g.field()), "degree": g.degree(), "value": g.serialize()}),
            Value::GwQ(g) => json!({"type": "gw", "field": "Q", "value": g.serialize(), "invariants": g.invariants()}),
            Value::Witt(w) => json!({"type": "witt", "field": w.field().to_string(), "dim_parity": w.dim_parity, "disc": w.disc}),
            Value::Bool(b) => json!({"type": "bool", "value": b}),
            Value::Element { field, value } => json!({"type": "element", "field": field, "value": value}),
            Value::Poly { field, value } => json!({"type": "poly", "field": field, "value": value}),
            Value::Factorization { field, lc, factors } => json!({
                "type": "factorization",
                "field": field,
                "lc": lc,
                "factors": factors.iter().map(|(p, m)| json!({"poly": p, "multiplicity": m})).collect::<Vec<_>>(),
            }),
            Value::Decomposition { base, terms } => json!({
                "type": "decomposition",
                "field": base.to_string(),
                "terms": decomposition_terms(base, terms)
                    .into_iter()
                    .map(|(alpha, eta, polys)| json!({"alpha": alpha, "eta": eta, "polys": polys}))
                    .collect::<Vec<_>>(),
            }),
        }
    }

    /// One-line human-readable rendering.
    pub fn pretty(&self) -> String {
        match self {
            Value::Kmw(x) => match x.class() {
                c if c.is_zero() => "0".into(),
                KmwClass::Gw(g) => format!("{}{} ({})", g.serialize(), hyperbolic_suffix(&g), invariants_text(&g.invariants())),
                _ => x.canonical().serialize(),
            },
            Value::KmwFt(g) => g.serialize(),
            Value::GwQ(g) => format!("{}{} ({})", g.serialize(), hyperbolic_suffix(g), invariants_text(&g.invariants())),
            Value::Witt(w) => format!("Witt class over {} with dimension parity {} and signed discriminant {}", w.field(), w.dim_parity, w.disc),
            Value::Bool(b) => b.to_string(),
            Value::Element { value, .. } | Value::Poly { value, .. } => value.clone(),
            Value::Factorization { lc, factors, .. } => {
                let mut parts: Vec<String> = factors
                    .iter()
                    .map(|(p, m)| if *m == 1 { format!("({p})") } else { format!("({p})^{m}") })
                    .collect();
                if lc != "1" || parts.is_empty() {
                    parts.insert(0, lc.clone());
                }
                parts.join("*")
            }
            Value::Decomposition { base, terms } => {
                let parts: Vec<String> = decomposition_terms(base, terms)
                    .into_iter()
                    .map(|(alpha, eta, polys)| {
                        let eta = match eta {
                            0 => String::new(),
                            1 => "eta*".into(),
                            m => format!("eta^{m}*"),
                        };
                        format!("({alpha}) * {eta}[{}]", polys.join(", "))
                    })
                    .collect();
                if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join(" + ")
                }
            }
        }
    }

    fn hint(&self) -> Hint {
        match self {
            Value::Kmw(x) => Hint::Fq(x.field().clone()),
            Value::KmwFt(g) => Hint::Ft(g.field().clone()),
            Value::GwQ(_) => Hint::Q,
            _ => Hint::None,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Value::Kmw(_) => "a Milnor-Witt class over a finite field",
            Value::KmwFt(_) => "a Milnor-Witt class over a function field",
            Value::GwQ(_) => "a form over Q",
            Value::Witt(_) => "a Witt class",
            Value::Bool(_) => "a truth value",
            Value::Element { .. } => "a field element",
            Value::Poly { .. } => "a polynomial",
            Value::Factorization { .. } => "a factorization",
            Value::Decomposition { .. } => "a decomposition",
        }
    }
}

/// Where untyped literals live.
#[derive(Clone, Debug)]
enum Hint {
    None,
    Fq(FiniteField),
    Ft(FiniteField),
    Q,
}

/// Whether a node determines its own field.
fn typed(n: &Node) -> bool {
    match n {
        Node::Int(_) | Node::Eta | Node::Hyperbolic | Node::Symbol(_) | Node::Gw(_) => false,
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Equal(a, b) => typed(a) || typed(b),
        Node::Neg(a) | Node::Pow(a, _) | Node::Compose(a, _) | Node::Defect(a) | Node::Witt(a) => typed(a),
        Node::Residue(_, a) | Node::Specialize(_, a) => typed(a),
        _ => true,
    }
}

fn sem<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Semantic(msg.into()))
}

fn need_field<T>() -> Result<T> {
    sem("cannot tell which field this literal lives in; add `over GF(q)`, `over GF(q)(t)` or `over Q`")
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Sub,
    Mul,
}

fn arith(op: Op, a: Value, b: Value) -> Result<Value> {
    Ok(match (a, b) {
        (Value::Kmw(x), Value::Kmw(y)) => Value::Kmw(match op {
            Op::Add => x.add(&y)?,
            Op::Sub => x.sub(&y)?,
            Op::Mul => x.mul(&y)?,
        }),
        (Value::KmwFt(x), Value::KmwFt(y)) => Value::KmwFt(match op {
            Op::Add => x.add(&y)?,
            Op::Sub => x.sub(&y)?,
            Op::Mul => x.mul(&y)?,
        }),
        (Value::GwQ(x), Value::GwQ(y)) => Value::GwQ(match op {
            Op::Add => x.add(&y)?,
            Op::Sub => x.sub(&y)?,
            Op::Mul => x.mul(&y)?,
        }),
        (a, b) => return sem(format!("cannot combine {} with {}", a.kind(), b.kind())),
    })
}

fn kmw(v: Value) -> Result<KmwFq> {
    match v {
        Value::Kmw(x) => Ok(x),
        other => sem(format!("expected a Milnor-Witt class over a finite field, got {}", other.kind())),
    }
}

fn kmw_ft(v: Value) -> Result<KmwFt> {
    match v {
        Value::KmwFt(x) => Ok(x),
        other => sem(format!("expected a Milnor-Witt class over GF(q)(t), got {}", other.kind())),
    }
}

fn finite(spec: &FieldSpec) -> Result<FiniteField> {
    match spec {
        FieldSpec::Finite { order, pos } => field_of_order(*order).map_err(|e| Error::Semantic(format!("field at {pos}: {e}"))),
        FieldSpec::Rationals => sem("a finite field is required here, not Q"),
    }
}

#[derive(Default)]
struct Evaluator {
    tr: Transferer,
}

impl Evaluator {
    fn eval(&mut self, n: &Node, hint: &Hint) -> Result<Value> {
        match n {
            Node::Int(k) => self.integer(*k, hint),
            Node::Eta => match hint {
                Hint::Fq(f) => Ok(Value::Kmw(KmwFq::symbol(f, 1, &[])?)),
                Hint::Ft(f) => Ok(Value::KmwFt(KmwFt::symbol(f, 1, &[]))),
                Hint::Q => Err(Error::Unsupported("eta over Q".into())),
                Hint::None => need_field(),
            },
            Node::Hyperbolic => match hint {
                Hint::Fq(f) => Ok(Value::Kmw(KmwFq::from_gw(&GwElement::hyperbolic(&GwField::Finite(f.clone())))?)),
                Hint::Ft(f) => Ok(Value::KmwFt(KmwFt::from_constant(&KmwFq::from_gw(&GwElement::hyperbolic(&GwField::Finite(f.clone())))?))),
                Hint::Q => Ok(Value::GwQ(GwElement::hyperbolic(&GwField::Rationals))),
                Hint::None => need_field(),
            },
            Node::Symbol(entries) => match hint {
                Hint::Fq(f) => {
                    let units = entries.iter().map(|e| Frac(f).unit(e)).collect::<Result<Vec<_>>>()?;
                    Ok(Value::Kmw(KmwFq::symbol(f, 0, &units)?))
                }
                Hint::Ft(f) => {
                    let r = entries.iter().map(|e| Frac(f).ratfn(e)).collect::<Result<Vec<_>>>()?;
                    Ok(Value::KmwFt(KmwFt::symbol(f, 0, &r)))
                }
                Hint::Q => Err(Error::Unsupported("symbols over Q".into())),
                Hint::None => need_field(),
            },
            Node::Gw(entries) => self.diagonal(entries, hint),
            Node::Add(a, b) => self.binary(Op::Add, a, b, hint),
            Node::Sub(a, b) => self.binary(Op::Sub, a, b, hint),
            Node::Mul(a, b) => self.binary(Op::Mul, a, b, hint),
            Node::Neg(a) => match self.eval(a, hint)? {
                Value::Kmw(x) => Ok(Value::Kmw(x.neg())),
                Value::KmwFt(x) => Ok(Value::KmwFt(x.neg())),
                Value::GwQ(x) => Ok(Value::GwQ(x.neg())),
                other => sem(format!("cannot negate {}", other.kind())),
            },
            Node::Pow(a, e) => {
                let base = self.eval(a, hint)?;
                let mut acc = self.integer(1, &base.hint())?;
                for _ in 0..*e {
                    acc = arith(Op::Mul, acc, base.clone())?;
                }
                Ok(acc)
            }
            Node::Over(a, d) => {
                let h = match d {
                    Domain::Field(FieldSpec::Rationals) => Hint::Q,
                    Domain::Field(s) => Hint::Fq(finite(s)?),
                    Domain::Function(s) => Hint::Ft(finite(s)?),
                };
                self.eval(a, &h)
            }
            Node::NEps(d, k) => match d {
                Domain::Field(FieldSpec::Rationals) => Ok(Value::GwQ(GwElement::n_epsilon(&GwField::Rationals, *k))),
                Domain::Field(s) => {
                    let f = finite(s)?;
                    Ok(Value::Kmw(KmwFq::from_gw(&GwElement::n_epsilon(&GwField::Finite(f), *k))?))
                }
                Domain::Function(s) => {
                    let f = finite(s)?;
                    Ok(Value::KmwFt(KmwFt::from_constant(&KmwFq::from_gw(&GwElement::n_epsilon(&GwField::Finite(f), *k))?)))
                }
            },
            Node::Transfer(mode, ext, arg) => self.transfer(*mode, ext, arg),
            Node::Residue(pt, arg) | Node::Specialize(pt, arg) => {
                let h = match hint {
                    Hint::Fq(f) => Hint::Ft(f.clone()),
                    other => other.clone(),
                };
                let g = kmw_ft(self.eval(arg, &h)?)?;
                let x = point(pt, g.field())?;
                Ok(Value::Kmw(if matches!(n, Node::Residue(..)) { g.residue(&x)? } else { g.specialize(&x)? }))
            }
            Node::Defect(arg) => Ok(Value::Kmw(characterization_defect(&kmw_ft(self.eval(arg, hint)?)?)?)),
            Node::Compose(arg, sub) => {
                let g = kmw_ft(self.eval(arg, hint)?)?;
                let s = Frac(g.field()).poly(sub)?;
                if s.is_constant() {
                    return sem("compose needs a non-constant polynomial in t");
                }
                Ok(Value::KmwFt(g.compose(&s)))
            }
            Node::Res(arg, target) => {
                let x = kmw(self.eval(arg, hint)?)?;
                let dst = finite(target)?;
                let emb = Embedding::canonical(x.field(), &dst)?;
                Ok(Value::Kmw(x.restrict(&emb)?))
            }
            Node::Witt(arg) => match self.eval(arg, hint)? {
                Value::Kmw(x) => match x.class() {
                    KmwClass::Gw(g) => Ok(Value::Witt(g.witt_project()?)),
                    KmwClass::Witt(w) => Ok(Value::Witt(w)),
                    KmwClass::Zero if x.degree() <= 0 => Ok(Value::Witt(WittElement::zero(x.field()))),
                    _ => sem(format!("witt needs a class of degree <= 0, got degree {}", x.degree())),
                },
                other => sem(format!("witt needs a class over a finite field, got {}", other.kind())),
            },
            Node::Equal(a, b) => {
                let (x, y) = self.pair(a, b, hint)?;
                Ok(Value::Bool(match (x, y) {
                    (Value::Kmw(x), Value::Kmw(y)) => x.equals(&y)?,
                    (Value::KmwFt(x), Value::KmwFt(y)) => equal_ft(&x, &y)?,
                    (Value::GwQ(x), Value::GwQ(y)) => x.equals(&y)?,
                    (x, y) => return sem(format!("cannot compare {} with {}", x.kind(), y.kind())),
                }))
            }
            Node::Decompose(ext, arg) => {
                let e = single_step(ext)?;
                let beta = kmw(self.eval(arg, &Hint::Fq(e.top().clone()))?)?;
                Ok(Value::Decomposition { base: e.base().clone(), terms: bt_decompose(&e, &beta)? })
            }
            Node::Norm(ext, a) | Node::Trace(ext, a) => {
                let is_norm = matches!(n, Node::Norm(..));
                if let ExtSpec::Rational { by } = ext {
                    let r = rational_ext(by)?;
                    let v = alg::eval(&QExt(&r), a)?;
                    let out = if is_norm { r.norm(&v) } else { r.trace(&v) };
                    return Ok(Value::Element { field: "Q".into(), value: out.to_string() });
                }
                let t = tower(ext)?;
                let mut v = Frac(t.top()).element(a)?;
                for s in t.steps().iter().rev() {
                    v = if is_norm { s.norm(v) } else { s.trace(v) };
                }
                Ok(Value::Element { field: t.base().to_string(), value: t.base().format(v) })
            }
            Node::MinPoly(ext, a) => {
                let e = single_step(ext)?;
                let v = Frac(e.top()).element(a)?;
                Ok(Value::Poly { field: e.base().to_string(), value: e.min_poly_of(v).format(e.base(), "t") })
            }
            Node::Factor(p, field) => {
                let f = finite(field)?;
                let poly = Frac(&f).poly(p)?;
                let fac = poly.factor(&f)?;
                Ok(Value::Factorization {
                    field: f.to_string(),
                    lc: f.format(fac.lc),
                    factors: fac.factors.iter().map(|(g, m)| (g.format(&f, "t"), *m)).collect(),
                })
            }
            Node::Transition(a, b) => {
                let (a, b) = (tower(a)?, tower(b)?);
                let u = transition_unit(&a, &b)?;
                Ok(Value::Element { field: a.top().to_string(), value: a.top().format(u) })
            }
        }
    }

    fn integer(&self, k: i64, hint: &Hint) -> Result<Value> {
        match hint {
            Hint::Fq(f) => Ok(Value::Kmw(KmwFq::integer(f, k))),
            Hint::Ft(f) => Ok(Value::KmwFt(KmwFt::from_constant(&KmwFq::integer(f, k)))),
            Hint::Q => Ok(Value::GwQ(GwElement::one(&GwField::Rationals).scale(k))),
            Hint::None => need_field(),
        }
    }

    fn diagonal(&self, entries: &[Elem], hint: &Hint) -> Result<Value> {
        match hint {
            Hint::Fq(f) => {
                let units = entries.iter().map(|e| Frac(f).unit(e)).collect::<Result<Vec<_>>>()?;
                Ok(Value::Kmw(KmwFq::from_gw(&GwElement::from_diagonal(f, &units)?)?))
            }
            Hint::Ft(f) => {
                let one = KmwFt::from_constant(&KmwFq::integer(f, 1));
                let mut acc = KmwFt::zero(f, 0);
                for e in entries {
                    let angle = one.add(&KmwFt::symbol(f, 1, &[Frac(f).ratfn(e)?]))?;
                    acc = acc.add(&angle)?;
                }
                Ok(Value::KmwFt(acc))
            }
            Hint::Q => {
                let units = entries.iter().map(rational_constant).collect::<Result<Vec<_>>>()?;
                Ok(Value::GwQ(GwElement::from_rational_diagonal(&units)?))
            }
            Hint::None => need_field(),
        }
    }

    fn binary(&mut self, op: Op, a: &Node, b: &Node, hint: &Hint) -> Result<Value> {
        let (x, y) = self.pair(a, b, hint)?;
        arith(op, x, y)
    }

    /// Evaluates both operands, letting a typed one supply the field of the other.
    fn pair(&mut self, a: &Node, b: &Node, hint: &Hint) -> Result<(Value, Value)> {
        if matches!(hint, Hint::None) && !typed(a) && typed(b) {
            let y = self.eval(b, hint)?;
            let x = self.eval(a, &y.hint())?;
            return Ok((x, y));
        }
        let x = self.eval(a, hint)?;
        let h = match x.hint() {
            Hint::None => hint.clone(),
            h => h,
        };
        let y = self.eval(b, &h)?;
        Ok((x, y))
    }

    fn transfer(&mut self, mode: TransferMode, ext: &ExtSpec, arg: &Node) -> Result<Value> {
        if let ExtSpec::Rational { by } = ext {
            let r = rational_ext(by)?;
            let mut acc = GwElement::zero(&GwField::Rationals);
            for (c, u) in q_form(arg, &r)? {
                let t = match mode {
                    TransferMode::Bt => r.scharlau_transfer(&[u], ScharlauFunctional::Coefficient(r.degree() - 1))?,
                    TransferMode::Geo => r.trace_form_transfer(&[u])?,
                };
                acc = acc.add(&t.scale(c))?;
            }
            return Ok(Value::GwQ(acc));
        }
        let t = tower(ext)?;
        let beta = kmw(self.eval(arg, &Hint::Fq(t.top().clone()))?)?;
        Ok(Value::Kmw(self.tr.tower(&t, &beta, mode)?))
    }
}

fn rational_constant(e: &Elem) -> Result<Q> {
    let v = alg::eval(&QPoly, e)?;
    match v.as_slice() {
        [c] => Ok(*c),
        [] => Err(Error::ZeroUnit("diagonal entry")),
        _ => sem("expected a rational number"),
    }
}

fn rational_ext(by: &Elem) -> Result<RationalExtension> {
    RationalExtension::new(alg::eval(&QPoly, by)?)
}

/// A diagonal form over a number field as `(multiplicity, unit)` pairs.
fn q_form(n: &Node, r: &RationalExtension) -> Result<Vec<(i64, Vec<Q>)>> {
    let scaled = |k: i64, v: Vec<(i64, Vec<Q>)>| v.into_iter().map(|(c, u)| (c * k, u)).collect();
    Ok(match n {
        Node::Int(k) => vec![(*k, r.one())],
        Node::Hyperbolic => {
            let minus_one = r.one().into_iter().map(|c| -c).collect();
            vec![(1, r.one()), (1, minus_one)]
        }
        Node::Gw(entries) => entries
            .iter()
            .map(|e| {
                let u = alg::eval(&QExt(r), e)?;
                if r.norm(&u) == Q::from(0) {
                    return Err(Error::ZeroUnit("diagonal entry"));
                }
                Ok((1, u))
            })
            .collect::<Result<_>>()?,
        Node::Add(a, b) => [q_form(a, r)?, q_form(b, r)?].concat(),
        Node::Sub(a, b) => [q_form(a, r)?, scaled(-1, q_form(b, r)?)].concat(),
        Node::Neg(a) => scaled(-1, q_form(a, r)?),
        Node::Mul(a, b) => match (a.as_ref(), b.as_ref()) {
            (Node::Int(k), x) | (x, Node::Int(k)) => scaled(*k, q_form(x, r)?),
            _ => return Err(Error::Unsupported("products of forms over a number field".into())),
        },
        _ => return Err(Error::Unsupported("only integer combinations of diagonal forms gw<...> can be transferred from a number field".into())),
    })
}

fn point(pt: &Point, f: &FiniteField) -> Result<ClosedPoint> {
    match pt {
        Point::Infinity => Ok(ClosedPoint::Infinity),
        Point::Finite(e) => ClosedPoint::finite(f, Frac(f).poly(e)?),
    }
}

fn step(base: &FiniteField, top: Option<&FiniteField>, by: Option<&Elem>, at: Option<&Elem>) -> Result<ExtensionDesc> {
    let want = match by {
        Some(e) => {
            let f = Frac(base).poly(e)?;
            if !f.is_monic() {
                return sem(format!("minimal polynomial {} is not monic", f.format(base, "t")));
            }
            Some(f)
        }
        None => None,
    };
    let top = match (top, &want) {
        (Some(t), _) => t.clone(),
        (None, Some(f)) => field_of_order((base.order() as u64).pow(f.deg() as u32))?,
        (None, None) => return sem("an extension needs a minimal polynomial or a top field"),
    };
    let e = match at {
        Some(a) => ExtensionDesc::from_generator(base, &top, Frac(&top).element(a)?)?,
        None => match &want {
            Some(f) => ExtensionDesc::from_min_poly(base, f)?,
            None => ExtensionDesc::from_generator(base, &top, top.gen())?,
        },
    };
    if e.top() != &top {
        return sem(format!("{} over {} defines {}, not {}", e.min_poly().format(base, "t"), base, e.top(), top));
    }
    if let Some(f) = want {
        if &f != e.min_poly() {
            return sem(format!("{} has minimal polynomial {}, not {}", top.format(e.generator()), e.min_poly().format(base, "t"), f.format(base, "t")));
        }
    }
    Ok(e)
}

fn tower(ext: &ExtSpec) -> Result<Tower> {
    match ext {
        ExtSpec::Simple { top, base, by, at } => {
            let base = finite(base)?;
            let s = step(&base, Some(&finite(top)?), by.as_ref(), at.as_ref())?;
            Tower::new(&base, vec![s])
        }
        ExtSpec::Tower { base, steps } => {
            let base = finite(base)?;
            let mut cur = base.clone();
            let mut out = Vec::new();
            for (f, at) in steps {
                let s = step(&cur, None, Some(f), at.as_ref())?;
                cur = s.top().clone();
                out.push(s);
            }
            Tower::new(&base, out)
        }
        ExtSpec::Rational { .. } => Err(Error::Unsupported("number fields only support transfers of diagonal forms and norms".into())),
    }
}

fn single_step(ext: &ExtSpec) -> Result<ExtensionDesc> {
    let t = tower(ext)?;
    match t.steps() {
        [s] => Ok(s.clone()),
        _ => sem("this operation needs a single extension step"),
    }
}

#[cfg(test)]
mod tests;
