//! Shared expression layer: tokens, the arithmetic expression AST used for
//! ring elements and polynomial literals, its canonical printer, and a
//! generic evaluator over any [`Algebra`].

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

/// 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {pos}: {message}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(BigUint),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Int(n) => write!(f, "integer `{n}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

const SYMBOLS: [&str; 16] = [
    "->", "(", ")", "[", "]", "{", "}", ",", ";", ":", "=", "+", "-", "*", "^", ".",
];

/// Split `text` into tokens. `#` and `//` start comments running to end of line.
pub fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += (i - start) as u32;
            out.push((Tok::Ident(word), pos));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            col += (i - start) as u32;
            let n = digits.parse::<BigUint>().expect("digit run parses");
            out.push((Tok::Int(n), pos));
            continue;
        }
        let rest: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let sym = SYMBOLS
            .iter()
            .find(|s| rest.starts_with(**s))
            .ok_or_else(|| SyntaxError {
                pos,
                message: format!("unexpected character `{c}`"),
            })?;
        i += sym.len();
        col += sym.len() as u32;
        out.push((Tok::Sym(sym), pos));
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

/// Arithmetic expression over identifiers and non-negative integer literals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(BigUint),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    /// Row-major matrix literal `[a, b; c, d]`.
    Matrix(Vec<Vec<Expr>>),
}

impl Expr {
    pub fn int(n: u64) -> Expr {
        Expr::Int(BigUint::from(n))
    }
    pub fn ident(s: &str) -> Expr {
        Expr::Ident(s.to_string())
    }
    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }
    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }
    pub fn pow(a: Expr, k: u32) -> Expr {
        Expr::Pow(Box::new(a), k)
    }

    /// Sum of `terms`, left-associated; zero when empty.
    pub fn sum(terms: Vec<Expr>) -> Expr {
        let mut it = terms.into_iter();
        match it.next() {
            None => Expr::int(0),
            Some(first) => it.fold(first, Expr::add),
        }
    }

    /// Product of `factors`, left-associated; one when empty.
    pub fn product(factors: Vec<Expr>) -> Expr {
        let mut it = factors.into_iter();
        match it.next() {
            None => Expr::int(1),
            Some(first) => it.fold(first, Expr::mul),
        }
    }

    /// Every identifier mentioned, in first-occurrence order.
    pub fn idents(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_idents(&mut out);
        out
    }

    fn collect_idents(&self, out: &mut Vec<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Ident(s) => {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_idents(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_idents(out);
                b.collect_idents(out);
            }
            Expr::Matrix(rows) => rows.iter().flatten().for_each(|e| e.collect_idents(out)),
        }
    }
}

#[derive(PartialEq, PartialOrd, Clone, Copy)]
enum Prec {
    Sum,
    Product,
    Unary,
    Atom,
}

fn prec(e: &Expr) -> Prec {
    match e {
        Expr::Add(..) | Expr::Sub(..) => Prec::Sum,
        Expr::Mul(..) => Prec::Product,
        Expr::Neg(_) => Prec::Unary,
        Expr::Pow(..) => Prec::Unary,
        Expr::Int(_) | Expr::Ident(_) | Expr::Matrix(_) => Prec::Atom,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, need: Prec) -> fmt::Result {
    if prec(e) < need {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Ident(s) => write!(f, "{s}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                write_at(f, a, Prec::Unary)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                write_at(f, a, Prec::Sum)?;
                write!(f, "{}", if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                write_at(f, b, Prec::Product)
            }
            Expr::Mul(a, b) => {
                write_at(f, a, Prec::Product)?;
                write!(f, "*")?;
                write_at(f, b, Prec::Unary)
            }
            Expr::Pow(a, k) => {
                write_at(f, a, Prec::Atom)?;
                write!(f, "^{k}")
            }
            Expr::Matrix(rows) => {
                write!(f, "[")?;
                for (r, row) in rows.iter().enumerate() {
                    if r > 0 {
                        write!(f, "; ")?;
                    }
                    for (c, e) in row.iter().enumerate() {
                        if c > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{e}")?;
                    }
                }
                write!(f, "]")
            }
        }
    }
}

/// Cursor over a token stream; the presentation parser shares it.
pub struct TokenStream {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl TokenStream {
    pub fn new(text: &str) -> Result<Self, SyntaxError> {
        Ok(TokenStream {
            toks: tokenize(text)?,
            at: 0,
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.at + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    pub fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    pub fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub fn error<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError {
            pos: self.pos(),
            message: message.into(),
        })
    }

    pub fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    pub fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == w)
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<Pos, SyntaxError> {
        if self.is_sym(s) {
            Ok(self.next().1)
        } else {
            self.error(format!("expected `{s}`, found {}", self.peek()))
        }
    }

    pub fn expect_word(&mut self, w: &str) -> Result<Pos, SyntaxError> {
        if self.is_word(w) {
            Ok(self.next().1)
        } else {
            self.error(format!("expected `{w}`, found {}", self.peek()))
        }
    }

    pub fn expect_ident(&mut self) -> Result<(String, Pos), SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let p = self.next().1;
                Ok((s, p))
            }
            other => self.error(format!("expected identifier, found {other}")),
        }
    }

    pub fn expect_int(&mut self) -> Result<(BigUint, Pos), SyntaxError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let p = self.next().1;
                Ok((n, p))
            }
            other => self.error(format!("expected integer, found {other}")),
        }
    }

    pub fn expect_small_int(&mut self) -> Result<(u32, Pos), SyntaxError> {
        let pos = self.pos();
        let (n, p) = self.expect_int()?;
        match n.to_u32() {
            Some(v) => Ok((v, p)),
            None => Err(SyntaxError {
                pos,
                message: format!("integer `{n}` too large"),
            }),
        }
    }

    /// sum := product (('+' | '-') product)*
    pub fn parse_expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut acc = self.parse_product()?;
        loop {
            if self.eat_sym("+") {
                acc = Expr::Add(Box::new(acc), Box::new(self.parse_product()?));
            } else if self.eat_sym("-") {
                acc = Expr::Sub(Box::new(acc), Box::new(self.parse_product()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn parse_product(&mut self) -> Result<Expr, SyntaxError> {
        let mut acc = self.parse_unary()?;
        while self.eat_sym("*") {
            acc = Expr::Mul(Box::new(acc), Box::new(self.parse_unary()?));
        }
        Ok(acc)
    }

    fn parse_unary(&mut self) -> Result<Expr, SyntaxError> {
        if self.eat_sym("-") {
            return Ok(Expr::Neg(Box::new(self.parse_unary()?)));
        }
        let base = self.parse_atom()?;
        if self.eat_sym("^") {
            let (k, _) = self.expect_small_int()?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(Expr::Int(n))
            }
            Tok::Ident(s) => {
                self.next();
                Ok(Expr::Ident(s))
            }
            Tok::Sym("(") => {
                self.next();
                let e = self.parse_expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Sym("[") => {
                self.next();
                let mut rows = vec![vec![self.parse_expr()?]];
                loop {
                    if self.eat_sym(",") {
                        rows.last_mut().expect("row").push(self.parse_expr()?);
                    } else if self.eat_sym(";") {
                        rows.push(vec![self.parse_expr()?]);
                    } else {
                        break;
                    }
                }
                self.expect_sym("]")?;
                Ok(Expr::Matrix(rows))
            }
            other => self.error(format!("expected expression, found {other}")),
        }
    }
}

/// Parse a standalone expression; trailing tokens are an error.
pub fn parse_expr(text: &str) -> Result<Expr, SyntaxError> {
    let mut ts = TokenStream::new(text)?;
    let e = ts.parse_expr()?;
    if !ts.at_eof() {
        return ts.error(format!("unexpected {} after expression", ts.peek()));
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("matrix literal: {0}")]
    BadMatrix(String),
    #[error("{0}")]
    Unsupported(String),
}

/// Target of expression evaluation.
pub trait Algebra {
    type Value: Clone;
    type Error: From<EvalError>;

    fn from_int(&self, n: &BigUint) -> Result<Self::Value, Self::Error>;
    fn ident(&self, name: &str) -> Result<Self::Value, Self::Error>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, Self::Error>;
    fn neg(&self, a: &Self::Value) -> Result<Self::Value, Self::Error>;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, Self::Error>;
    fn matrix(&self, rows: &[Vec<Expr>]) -> Result<Self::Value, Self::Error> {
        let _ = rows;
        Err(EvalError::BadMatrix("matrix literals are not valid here".into()).into())
    }
}

pub fn eval<A: Algebra>(alg: &A, e: &Expr) -> Result<A::Value, A::Error> {
    match e {
        Expr::Int(n) => alg.from_int(n),
        Expr::Ident(s) => alg.ident(s),
        Expr::Neg(a) => alg.neg(&eval(alg, a)?),
        Expr::Add(a, b) => alg.add(&eval(alg, a)?, &eval(alg, b)?),
        Expr::Sub(a, b) => {
            let nb = alg.neg(&eval(alg, b)?)?;
            alg.add(&eval(alg, a)?, &nb)
        }
        Expr::Mul(a, b) => alg.mul(&eval(alg, a)?, &eval(alg, b)?),
        Expr::Pow(a, k) => {
            let base = eval(alg, a)?;
            let mut acc = alg.from_int(&BigUint::from(1u32))?;
            let mut sq = base;
            let mut k = *k;
            while k > 0 {
                if k & 1 == 1 {
                    acc = alg.mul(&acc, &sq)?;
                }
                k >>= 1;
                if k > 0 {
                    sq = alg.mul(&sq, &sq)?;
                }
            }
            Ok(acc)
        }
        Expr::Matrix(rows) => alg.matrix(rows),
    }
}

/// `n` as a sum of ones by double-and-add; shared by integer embeddings.
pub fn int_by_doubling<V: Clone, E>(
    n: &BigUint,
    zero: V,
    one: V,
    add: impl Fn(&V, &V) -> Result<V, E>,
) -> Result<V, E> {
    let mut acc = zero;
    let mut pow = one;
    let mut n = n.clone();
    while !n.is_zero() {
        if n.bit(0) {
            acc = add(&acc, &pow)?;
        }
        n >>= 1u32;
        if !n.is_zero() {
            pow = add(&pow, &pow)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_round_trip() {
        for src in [
            "a^2*z + a + 1",
            "-a*b - (c + d)",
            "(a + 1)^3",
            "x2*x1 - -3*x1",
            "[1, a; 0, 1]",
            "(a*z)*x1^2*x2",
            "--a",
            "(a^2)^3",
        ] {
            let e = parse_expr(src).unwrap();
            let printed = e.to_string();
            assert_eq!(parse_expr(&printed).unwrap(), e, "{src} -> {printed}");
        }
    }

    #[test]
    fn neg_binds_tighter_than_product() {
        let e = parse_expr("-a*b").unwrap();
        assert!(matches!(e, Expr::Mul(ref l, _) if matches!(**l, Expr::Neg(_))));
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_expr("a +\n  * b").unwrap_err();
        assert_eq!(err.pos, Pos { line: 2, col: 3 });
    }

    #[test]
    fn comments_are_skipped() {
        let toks = tokenize("a # hidden\n// also hidden\nb").unwrap();
        assert_eq!(toks.len(), 3);
    }
}
