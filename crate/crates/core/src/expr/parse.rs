//! Tokenizer and recursive-descent parser for evaluator expressions.

use crate::error::{Error, Result};
use crate::transfers::TransferMode;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Sym(char),
    Arrow,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[start..i].parse().map_err(|_| Error::Parse { pos: start, msg: "integer out of range".into() })?;
            out.push(Token { tok: Tok::Int(n), pos: start });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(src[start..i].to_string()), pos: start });
        } else if c == '-' && bytes.get(i + 1) == Some(&b'>') {
            out.push(Token { tok: Tok::Arrow, pos: i });
            i += 2;
        } else if "()[]<>,+-*/^".contains(c) {
            out.push(Token { tok: Tok::Sym(c), pos: i });
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    out.push(Token { tok: Tok::End, pos: src.len() });
    Ok(out)
}

/// Scalar expressions: polynomials or rational functions in `x` and `t`.
#[derive(Clone, Debug)]
pub enum Elem {
    Int(i64),
    X,
    T,
    Add(Box<Elem>, Box<Elem>),
    Sub(Box<Elem>, Box<Elem>),
    Mul(Box<Elem>, Box<Elem>),
    Div(Box<Elem>, Box<Elem>),
    Neg(Box<Elem>),
    Pow(Box<Elem>, i64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum FieldSpec {
    Finite { order: u64, pos: usize },
    Rationals,
}

#[derive(Clone, Debug)]
pub enum Domain {
    Field(FieldSpec),
    /// `GF(q)(t)`.
    Function(FieldSpec),
}

#[derive(Clone, Debug)]
pub enum ExtSpec {
    /// `GF(9)/GF(3) [by f] [at a]`.
    Simple { top: FieldSpec, base: FieldSpec, by: Option<Elem>, at: Option<Elem> },
    /// `GF(3) -> f_1 [at a_1] -> f_2 [at a_2] ...`.
    Tower { base: FieldSpec, steps: Vec<(Elem, Option<Elem>)> },
    /// `Q by f`.
    Rational { by: Elem },
}

#[derive(Clone, Debug)]
pub enum Point {
    Infinity,
    Finite(Elem),
}

#[derive(Clone, Debug)]
pub enum Node {
    Int(i64),
    Eta,
    Hyperbolic,
    Symbol(Vec<Elem>),
    Gw(Vec<Elem>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Pow(Box<Node>, u32),
    Over(Box<Node>, Domain),
    NEps(Domain, u64),
    Transfer(TransferMode, ExtSpec, Box<Node>),
    Residue(Point, Box<Node>),
    Specialize(Point, Box<Node>),
    Defect(Box<Node>),
    Compose(Box<Node>, Elem),
    Res(Box<Node>, FieldSpec),
    Witt(Box<Node>),
    Equal(Box<Node>, Box<Node>),
    Decompose(ExtSpec, Box<Node>),
    Norm(ExtSpec, Elem),
    Trace(ExtSpec, Elem),
    MinPoly(ExtSpec, Elem),
    Factor(Elem, FieldSpec),
    Transition(ExtSpec, ExtSpec),
}

pub fn parse(src: &str) -> Result<Node> {
    let mut p = Parser { toks: tokenize(src)?, i: 0 };
    let node = p.expr()?;
    p.expect_end()?;
    Ok(node)
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }
    fn pos(&self) -> usize {
        self.toks[self.i].pos
    }
    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].tok.clone();
        if t != Tok::End {
            self.i += 1;
        }
        t
    }
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }
    fn is_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }
    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == s)
    }
    fn eat_sym(&mut self, c: char) -> bool {
        let hit = self.is_sym(c);
        if hit {
            self.i += 1;
        }
        hit
    }
    fn eat_ident(&mut self, s: &str) -> bool {
        let hit = self.is_ident(s);
        if hit {
            self.i += 1;
        }
        hit
    }
    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }
    fn expect_end(&self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }
    fn int(&mut self) -> Result<i64> {
        match self.bump() {
            Tok::Int(n) => Ok(n),
            _ => {
                self.i -= 1;
                self.err("expected an integer")
            }
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let node = self.sum()?;
        if self.eat_ident("over") {
            let d = self.domain()?;
            return Ok(Node::Over(Box::new(node), d));
        }
        Ok(node)
    }

    fn sum(&mut self) -> Result<Node> {
        let mut acc = self.product()?;
        loop {
            if self.eat_sym('+') {
                acc = Node::Add(Box::new(acc), Box::new(self.product()?));
            } else if self.eat_sym('-') {
                acc = Node::Sub(Box::new(acc), Box::new(self.product()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Node> {
        let mut acc = self.unary()?;
        while self.eat_sym('*') {
            acc = Node::Mul(Box::new(acc), Box::new(self.unary()?));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat_sym('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat_sym('^') {
            let e = self.int()?;
            return Ok(Node::Pow(Box::new(base), e as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => Ok(Node::Int(n)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Sym('[') => {
                let entries = self.elem_list(']')?;
                Ok(Node::Symbol(entries))
            }
            Tok::Ident(w) => match w.as_str() {
                "eta" => Ok(Node::Eta),
                "h" => Ok(Node::Hyperbolic),
                "gw" => {
                    self.expect_sym('<')?;
                    Ok(Node::Gw(self.elem_list('>')?))
                }
                _ if self.is_sym('(') => {
                    self.i += 1;
                    let node = self.call(&w, pos)?;
                    self.expect_sym(')')?;
                    Ok(node)
                }
                _ => Err(Error::Parse { pos, msg: format!("unknown name `{w}`") }),
            },
            _ => Err(Error::Parse { pos, msg: "expected a value".into() }),
        }
    }

    fn elem_list(&mut self, close: char) -> Result<Vec<Elem>> {
        let mut out = Vec::new();
        if self.eat_sym(close) {
            return Ok(out);
        }
        loop {
            out.push(self.elem()?);
            if self.eat_sym(close) {
                return Ok(out);
            }
            self.expect_sym(',')?;
        }
    }

    fn comma(&mut self) -> Result<()> {
        self.expect_sym(',')
    }

    fn call(&mut self, name: &str, pos: usize) -> Result<Node> {
        Ok(match name {
            "n_eps" => {
                let d = self.domain()?;
                self.comma()?;
                let n = self.int()?;
                if n < 0 {
                    return self.err("n_eps needs n >= 0");
                }
                Node::NEps(d, n as u64)
            }
            "transfer" => {
                let mode = match self.bump() {
                    Tok::Ident(m) if m == "bt" => TransferMode::Bt,
                    Tok::Ident(m) if m == "geo" => TransferMode::Geo,
                    _ => {
                        self.i -= 1;
                        return self.err("expected `bt` or `geo`");
                    }
                };
                self.comma()?;
                let ext = self.ext()?;
                self.comma()?;
                Node::Transfer(mode, ext, Box::new(self.expr()?))
            }
            "residue" | "specialize" => {
                let pt = if self.eat_ident("inf") { Point::Infinity } else { Point::Finite(self.elem()?) };
                self.comma()?;
                let v = Box::new(self.expr()?);
                if name == "residue" { Node::Residue(pt, v) } else { Node::Specialize(pt, v) }
            }
            "defect" => Node::Defect(Box::new(self.expr()?)),
            "witt" => Node::Witt(Box::new(self.expr()?)),
            "compose" => {
                let v = self.expr()?;
                self.comma()?;
                Node::Compose(Box::new(v), self.elem()?)
            }
            "res" => {
                let v = self.expr()?;
                self.comma()?;
                Node::Res(Box::new(v), self.field()?)
            }
            "equal" => {
                let a = self.expr()?;
                self.comma()?;
                Node::Equal(Box::new(a), Box::new(self.expr()?))
            }
            "decompose" => {
                let ext = self.ext()?;
                self.comma()?;
                Node::Decompose(ext, Box::new(self.expr()?))
            }
            "norm" | "trace" | "minpoly" => {
                let ext = self.ext()?;
                self.comma()?;
                let a = self.elem()?;
                match name {
                    "norm" => Node::Norm(ext, a),
                    "trace" => Node::Trace(ext, a),
                    _ => Node::MinPoly(ext, a),
                }
            }
            "factor" => {
                let f = self.elem()?;
                if !self.eat_ident("over") {
                    return self.err("expected `over`");
                }
                Node::Factor(f, self.field()?)
            }
            "transition" => {
                let a = self.ext()?;
                self.comma()?;
                Node::Transition(a, self.ext()?)
            }
            _ => return Err(Error::Parse { pos, msg: format!("unknown function `{name}`") }),
        })
    }

    fn field(&mut self) -> Result<FieldSpec> {
        let pos = self.pos();
        if self.eat_ident("Q") || self.eat_ident("QQ") {
            return Ok(FieldSpec::Rationals);
        }
        if !self.eat_ident("GF") {
            return self.err("expected a field such as GF(9) or Q");
        }
        self.expect_sym('(')?;
        let mut order = self.int()? as u64;
        if self.eat_sym('^') {
            let k = self.int()?;
            order = u32::try_from(k).ok().and_then(|k| order.checked_pow(k)).ok_or(Error::Parse { pos, msg: "field order overflows".into() })?;
        }
        self.expect_sym(')')?;
        Ok(FieldSpec::Finite { order, pos })
    }

    fn domain(&mut self) -> Result<Domain> {
        let f = self.field()?;
        // `GF(q)(t)` is the rational function field.
        if self.is_sym('(') && matches!(self.toks.get(self.i + 1).map(|t| &t.tok), Some(Tok::Ident(w)) if w == "t") {
            self.i += 2;
            self.expect_sym(')')?;
            return Ok(Domain::Function(f));
        }
        Ok(Domain::Field(f))
    }

    fn ext(&mut self) -> Result<ExtSpec> {
        let first = self.field()?;
        if first == FieldSpec::Rationals {
            if !self.eat_ident("by") {
                return self.err("expected `by` after Q");
            }
            return Ok(ExtSpec::Rational { by: self.elem()? });
        }
        if *self.peek() == Tok::Arrow {
            let mut steps = Vec::new();
            while *self.peek() == Tok::Arrow {
                self.i += 1;
                let f = self.elem()?;
                let at = if self.eat_ident("at") { Some(self.elem()?) } else { None };
                steps.push((f, at));
            }
            return Ok(ExtSpec::Tower { base: first, steps });
        }
        self.expect_sym('/')?;
        let base = self.field()?;
        let by = if self.eat_ident("by") { Some(self.elem()?) } else { None };
        let at = if self.eat_ident("at") { Some(self.elem()?) } else { None };
        Ok(ExtSpec::Simple { top: first, base, by, at })
    }

    fn elem(&mut self) -> Result<Elem> {
        let mut acc = self.elem_term()?;
        loop {
            if self.eat_sym('+') {
                acc = Elem::Add(Box::new(acc), Box::new(self.elem_term()?));
            } else if self.eat_sym('-') {
                acc = Elem::Sub(Box::new(acc), Box::new(self.elem_term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn elem_term(&mut self) -> Result<Elem> {
        let mut acc = self.elem_unary()?;
        loop {
            if self.eat_sym('*') {
                acc = Elem::Mul(Box::new(acc), Box::new(self.elem_unary()?));
            } else if self.eat_sym('/') {
                acc = Elem::Div(Box::new(acc), Box::new(self.elem_unary()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn elem_unary(&mut self) -> Result<Elem> {
        if self.eat_sym('-') {
            return Ok(Elem::Neg(Box::new(self.elem_unary()?)));
        }
        let base = match self.bump() {
            Tok::Int(n) => Elem::Int(n),
            Tok::Ident(w) if w == "x" => Elem::X,
            Tok::Ident(w) if w == "t" => Elem::T,
            Tok::Sym('(') => {
                let e = self.elem()?;
                self.expect_sym(')')?;
                e
            }
            _ => {
                self.i -= 1;
                return self.err("expected a polynomial in x or t");
            }
        };
        if self.eat_sym('^') {
            let neg = self.eat_sym('-');
            let e = self.int()?;
            return Ok(Elem::Pow(Box::new(base), if neg { -e } else { e }));
        }
        Ok(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_are_reported() {
        match parse("n_eps(GF(3), )") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 13),
            other => panic!("{other:?}"),
        }
        match parse("[x+1, 2] over GF(9) junk") {
            Err(Error::Parse { pos, msg }) => assert_eq!((pos, msg.as_str()), (20, "unexpected trailing input")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("2 $ 3"), Err(Error::Parse { pos: 2, .. })));
    }

    #[test]
    fn shapes() {
        assert!(matches!(parse("transfer(geo, GF(9)/GF(3) by t^2+1, gw<1>)").unwrap(), Node::Transfer(TransferMode::Geo, ExtSpec::Simple { .. }, _)));
        assert!(matches!(parse("residue(t, [t,2] over GF(3)(t))").unwrap(), Node::Residue(Point::Finite(_), _)));
        match parse("transfer(bt, GF(3) -> t^2+1 at x -> t^2+x*t+2, 1)").unwrap() {
            Node::Transfer(_, ExtSpec::Tower { steps, .. }, _) => assert_eq!(steps.len(), 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("1 - 2*eta*[2*x+1] over GF(3^2)").unwrap(), Node::Over(_, Domain::Field(FieldSpec::Finite { order: 9, .. }))));
    }
}
