//! The two infinite coefficient rings, the integers and `F[t]` over a finite
//! field, plus matrix and trivial-extension constructions over them.
//! Only pointwise operations are offered.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::{Elem, FiniteRing, RingError};
use crate::expr::{self, Algebra, EvalError, Expr};

#[derive(Clone, Debug)]
pub enum SymSpec {
    Int,
    Poly { field: Arc<FiniteRing>, var: String },
    Triangular { base: Box<SymSpec>, size: usize },
    FullMatrix { base: Box<SymSpec>, size: usize },
    Trivial { base: Box<SymSpec> },
}

/// Structural value. Matrices are stored full and row-major; polynomials
/// are trimmed coefficient lists, constant first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SymValue {
    Int(BigInt),
    Poly(Vec<Elem>),
    Mat(Vec<SymValue>),
    Pair(Box<SymValue>, Box<SymValue>),
}

/// A symbolic ring with its canonical generators.
#[derive(Clone, Debug)]
pub struct SymRing {
    spec: SymSpec,
    gens: Vec<(String, SymValue)>,
}

impl SymSpec {
    pub fn describe(&self) -> String {
        match self {
            SymSpec::Int => "Int".to_string(),
            SymSpec::Poly { field, var } => format!("polyring({}, {var})", field.describe()),
            SymSpec::Triangular { base, size } => format!("triangular({}, {size})", base.describe()),
            SymSpec::FullMatrix { base, size } => format!("matrices({}, {size})", base.describe()),
            SymSpec::Trivial { base } => format!("trivial({})", base.describe()),
        }
    }

    fn zero(&self) -> SymValue {
        match self {
            SymSpec::Int => SymValue::Int(BigInt::zero()),
            SymSpec::Poly { .. } => SymValue::Poly(Vec::new()),
            SymSpec::Triangular { base, size } | SymSpec::FullMatrix { base, size } => {
                SymValue::Mat(vec![base.zero(); size * size])
            }
            SymSpec::Trivial { base } => SymValue::Pair(Box::new(base.zero()), Box::new(base.zero())),
        }
    }

    fn one(&self) -> SymValue {
        match self {
            SymSpec::Int => SymValue::Int(BigInt::one()),
            SymSpec::Poly { field, .. } => SymValue::Poly(vec![field.one()]),
            SymSpec::Triangular { base, size } | SymSpec::FullMatrix { base, size } => {
                self.scalar(base, *size, base.one())
            }
            SymSpec::Trivial { base } => SymValue::Pair(Box::new(base.one()), Box::new(base.zero())),
        }
    }

    fn scalar(&self, base: &SymSpec, size: usize, c: SymValue) -> SymValue {
        let mut m = vec![base.zero(); size * size];
        for i in 0..size {
            m[i * size + i] = c.clone();
        }
        SymValue::Mat(m)
    }

    fn embed(&self, c: SymValue) -> SymValue {
        match self {
            SymSpec::Triangular { base, size } | SymSpec::FullMatrix { base, size } => {
                self.scalar(base, *size, c)
            }
            SymSpec::Trivial { base } => SymValue::Pair(Box::new(c), Box::new(base.zero())),
            SymSpec::Int | SymSpec::Poly { .. } => c,
        }
    }

    fn add(&self, a: &SymValue, b: &SymValue) -> SymValue {
        match (self, a, b) {
            (SymSpec::Int, SymValue::Int(x), SymValue::Int(y)) => SymValue::Int(x + y),
            (SymSpec::Poly { field, .. }, SymValue::Poly(x), SymValue::Poly(y)) => {
                let n = x.len().max(y.len());
                let get = |v: &Vec<Elem>, i: usize| v.get(i).copied().unwrap_or(Elem::ZERO);
                trim((0..n).map(|i| field.add(get(x, i), get(y, i))).collect())
            }
            (
                SymSpec::Triangular { base, .. } | SymSpec::FullMatrix { base, .. },
                SymValue::Mat(x),
                SymValue::Mat(y),
            ) => SymValue::Mat(x.iter().zip(y).map(|(p, q)| base.add(p, q)).collect()),
            (SymSpec::Trivial { base }, SymValue::Pair(r1, m1), SymValue::Pair(r2, m2)) => {
                SymValue::Pair(Box::new(base.add(r1, r2)), Box::new(base.add(m1, m2)))
            }
            _ => panic!("value shape does not match {}", self.describe()),
        }
    }

    fn neg(&self, a: &SymValue) -> SymValue {
        match (self, a) {
            (SymSpec::Int, SymValue::Int(x)) => SymValue::Int(-x),
            (SymSpec::Poly { field, .. }, SymValue::Poly(x)) => {
                SymValue::Poly(x.iter().map(|c| field.neg(*c)).collect())
            }
            (SymSpec::Triangular { base, .. } | SymSpec::FullMatrix { base, .. }, SymValue::Mat(x)) => {
                SymValue::Mat(x.iter().map(|p| base.neg(p)).collect())
            }
            (SymSpec::Trivial { base }, SymValue::Pair(r, m)) => {
                SymValue::Pair(Box::new(base.neg(r)), Box::new(base.neg(m)))
            }
            _ => panic!("value shape does not match {}", self.describe()),
        }
    }

    fn mul(&self, a: &SymValue, b: &SymValue) -> SymValue {
        match (self, a, b) {
            (SymSpec::Int, SymValue::Int(x), SymValue::Int(y)) => SymValue::Int(x * y),
            (SymSpec::Poly { field, .. }, SymValue::Poly(x), SymValue::Poly(y)) => {
                if x.is_empty() || y.is_empty() {
                    return SymValue::Poly(Vec::new());
                }
                let mut c = vec![Elem::ZERO; x.len() + y.len() - 1];
                for (i, p) in x.iter().enumerate() {
                    for (j, q) in y.iter().enumerate() {
                        c[i + j] = field.add(c[i + j], field.mul(*p, *q));
                    }
                }
                trim(c)
            }
            (
                SymSpec::Triangular { base, size } | SymSpec::FullMatrix { base, size },
                SymValue::Mat(x),
                SymValue::Mat(y),
            ) => {
                let n = *size;
                let mut out = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = base.zero();
                        for k in 0..n {
                            acc = base.add(&acc, &base.mul(&x[i * n + k], &y[k * n + j]));
                        }
                        out.push(acc);
                    }
                }
                SymValue::Mat(out)
            }
            (SymSpec::Trivial { base }, SymValue::Pair(r1, m1), SymValue::Pair(r2, m2)) => {
                let r = base.mul(r1, r2);
                let m = base.add(&base.mul(r1, m2), &base.mul(m1, r2));
                SymValue::Pair(Box::new(r), Box::new(m))
            }
            _ => panic!("value shape does not match {}", self.describe()),
        }
    }

    fn is_domain(&self) -> bool {
        matches!(self, SymSpec::Int | SymSpec::Poly { .. })
    }

    fn is_nilpotent(&self, a: &SymValue) -> Result<bool, RingError> {
        Ok(match (self, a) {
            (SymSpec::Int, _) | (SymSpec::Poly { .. }, _) => *a == self.zero(),
            (SymSpec::Triangular { base, size }, SymValue::Mat(x)) => {
                let mut all = true;
                for i in 0..*size {
                    all &= base.is_nilpotent(&x[i * size + i])?;
                }
                all
            }
            (SymSpec::FullMatrix { base, size }, SymValue::Mat(_)) => {
                if !base.is_domain() {
                    return Err(RingError::SymbolicRingUnsupported(format!(
                        "nilpotency in {}",
                        self.describe()
                    )));
                }
                // over a commutative domain, nilpotent matrices satisfy A^n = 0
                let mut p = a.clone();
                for _ in 1..*size {
                    p = self.mul(&p, a);
                }
                p == self.zero()
            }
            (SymSpec::Trivial { base }, SymValue::Pair(r, _)) => base.is_nilpotent(r)?,
            _ => panic!("value shape does not match {}", self.describe()),
        })
    }

    fn format(&self, a: &SymValue) -> String {
        match (self, a) {
            (SymSpec::Int, SymValue::Int(x)) => x.to_string(),
            (SymSpec::Poly { field, var }, SymValue::Poly(x)) => {
                let mut terms = Vec::new();
                for (i, c) in x.iter().enumerate().rev() {
                    if *c == Elem::ZERO {
                        continue;
                    }
                    let cs = field.format(*c);
                    let pow = match i {
                        0 => None,
                        1 => Some(var.clone()),
                        _ => Some(format!("{var}^{i}")),
                    };
                    terms.push(match pow {
                        None => cs,
                        Some(p) if *c == field.one() => p,
                        Some(p) if cs.contains(' ') => format!("({cs})*{p}"),
                        Some(p) => format!("{cs}*{p}"),
                    });
                }
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join(" + ")
                }
            }
            (SymSpec::Triangular { base, size } | SymSpec::FullMatrix { base, size }, SymValue::Mat(x)) => {
                let rows: Vec<String> = x
                    .chunks(*size)
                    .map(|row| row.iter().map(|e| base.format(e)).collect::<Vec<_>>().join(", "))
                    .collect();
                format!("[{}]", rows.join("; "))
            }
            (SymSpec::Trivial { base }, SymValue::Pair(r, m)) => {
                let (r, m) = (base.format(r), base.format(m));
                format!("[{r}, {m}; 0, {r}]")
            }
            _ => panic!("value shape does not match {}", self.describe()),
        }
    }

    fn generators(&self) -> Vec<(String, SymValue)> {
        let mut out: Vec<(String, SymValue)> = Vec::new();
        match self {
            SymSpec::Int => {}
            SymSpec::Poly { field, var } => {
                for g in field.generators() {
                    out.push((g.name.clone(), SymValue::Poly(trim_vec(vec![g.elem]))));
                }
                out.push((var.clone(), SymValue::Poly(vec![Elem::ZERO, field.one()])));
            }
            SymSpec::Triangular { base, size } | SymSpec::FullMatrix { base, size } => {
                for (name, v) in base.generators() {
                    out.push((name, self.embed(v)));
                }
                let tri = matches!(self, SymSpec::Triangular { .. });
                for i in 0..*size {
                    for j in 0..*size {
                        if tri && i > j {
                            continue;
                        }
                        let mut m = vec![base.zero(); size * size];
                        m[i * size + j] = base.one();
                        out.push((format!("e{}{}", i + 1, j + 1), SymValue::Mat(m)));
                    }
                }
            }
            SymSpec::Trivial { base } => {
                for (name, v) in base.generators() {
                    out.push((name, self.embed(v)));
                }
                out.push((
                    "e".into(),
                    SymValue::Pair(Box::new(base.zero()), Box::new(base.one())),
                ));
            }
        }
        out
    }

    fn random<R: Rng>(&self, rng: &mut R, bound: i64) -> SymValue {
        match self {
            SymSpec::Int => SymValue::Int(BigInt::from(rng.gen_range(-bound..=bound))),
            SymSpec::Poly { field, .. } => {
                trim((0..3).map(|_| field.random_elem(rng)).collect())
            }
            SymSpec::Triangular { base, size } => {
                let mut m = vec![base.zero(); size * size];
                for i in 0..*size {
                    for j in i..*size {
                        m[i * size + j] = base.random(rng, bound);
                    }
                }
                SymValue::Mat(m)
            }
            SymSpec::FullMatrix { base, size } => {
                SymValue::Mat((0..size * size).map(|_| base.random(rng, bound)).collect())
            }
            SymSpec::Trivial { base } => SymValue::Pair(
                Box::new(base.random(rng, bound)),
                Box::new(base.random(rng, bound)),
            ),
        }
    }

    /// Additive basis over the integers, for the single-level constructions
    /// over `Int`. Each entry is a basis value.
    fn int_basis(&self) -> Option<Vec<SymValue>> {
        match self {
            SymSpec::Int => Some(vec![self.one()]),
            SymSpec::Triangular { base, size } | SymSpec::FullMatrix { base, size }
                if matches!(**base, SymSpec::Int) =>
            {
                let tri = matches!(self, SymSpec::Triangular { .. });
                let mut out = Vec::new();
                for i in 0..*size {
                    for j in 0..*size {
                        if tri && i > j {
                            continue;
                        }
                        let mut m = vec![base.zero(); size * size];
                        m[i * size + j] = base.one();
                        out.push(SymValue::Mat(m));
                    }
                }
                Some(out)
            }
            SymSpec::Trivial { base } if matches!(**base, SymSpec::Int) => Some(vec![
                self.one(),
                SymValue::Pair(Box::new(base.zero()), Box::new(base.one())),
            ]),
            _ => None,
        }
    }

    fn int_coords(&self, a: &SymValue) -> Option<Vec<BigInt>> {
        let int = |v: &SymValue| match v {
            SymValue::Int(x) => x.clone(),
            _ => unreachable!("integer entries"),
        };
        match (self, a) {
            (SymSpec::Int, SymValue::Int(x)) => Some(vec![x.clone()]),
            (SymSpec::Triangular { base, size }, SymValue::Mat(x)) if matches!(**base, SymSpec::Int) => {
                let mut out = Vec::new();
                for i in 0..*size {
                    for j in i..*size {
                        out.push(int(&x[i * size + j]));
                    }
                }
                Some(out)
            }
            (SymSpec::FullMatrix { base, .. }, SymValue::Mat(x)) if matches!(**base, SymSpec::Int) => {
                Some(x.iter().map(int).collect())
            }
            (SymSpec::Trivial { base }, SymValue::Pair(r, m)) if matches!(**base, SymSpec::Int) => {
                Some(vec![int(r), int(m)])
            }
            _ => None,
        }
    }
}

fn trim(mut v: Vec<Elem>) -> SymValue {
    while v.last() == Some(&Elem::ZERO) {
        v.pop();
    }
    SymValue::Poly(v)
}

fn trim_vec(v: Vec<Elem>) -> Vec<Elem> {
    match trim(v) {
        SymValue::Poly(v) => v,
        _ => unreachable!(),
    }
}

impl SymRing {
    pub fn new(spec: SymSpec) -> Result<Self, RingError> {
        validate(&spec)?;
        let gens = spec.generators();
        for (i, (name, _)) in gens.iter().enumerate() {
            if gens[..i].iter().any(|(n, _)| n == name) {
                return Err(RingError::MalformedPreset(format!(
                    "generator name `{name}` is ambiguous in this construction"
                )));
            }
        }
        Ok(SymRing { spec, gens })
    }

    pub fn spec(&self) -> &SymSpec {
        &self.spec
    }

    pub fn describe(&self) -> String {
        self.spec.describe()
    }

    pub fn zero(&self) -> SymValue {
        self.spec.zero()
    }

    pub fn one(&self) -> SymValue {
        self.spec.one()
    }

    pub fn add(&self, a: &SymValue, b: &SymValue) -> SymValue {
        self.spec.add(a, b)
    }

    pub fn neg(&self, a: &SymValue) -> SymValue {
        self.spec.neg(a)
    }

    pub fn sub(&self, a: &SymValue, b: &SymValue) -> SymValue {
        self.spec.add(a, &self.spec.neg(b))
    }

    pub fn mul(&self, a: &SymValue, b: &SymValue) -> SymValue {
        self.spec.mul(a, b)
    }

    /// Structural nilpotency test.
    pub fn is_nilpotent(&self, a: &SymValue) -> Result<bool, RingError> {
        self.spec.is_nilpotent(a)
    }

    pub fn format(&self, a: &SymValue) -> String {
        self.spec.format(a)
    }

    pub fn generators(&self) -> &[(String, SymValue)] {
        &self.gens
    }

    pub fn eval(&self, e: &Expr) -> Result<SymValue, RingError> {
        expr::eval(self, e)
    }

    pub fn parse_elem(&self, text: &str) -> Result<SymValue, RingError> {
        self.eval(&expr::parse_expr(text)?)
    }

    /// Random element with integer entries in `[-bound, bound]`.
    pub fn random<R: Rng>(&self, rng: &mut R, bound: i64) -> SymValue {
        self.spec.random(rng, bound)
    }

    pub fn int_basis(&self) -> Option<Vec<SymValue>> {
        self.spec.int_basis()
    }

    pub fn int_coords(&self, a: &SymValue) -> Option<Vec<BigInt>> {
        self.spec.int_coords(a)
    }

    /// `n · a` for an integer `n`.
    pub fn int_scale(&self, n: &BigInt, a: &SymValue) -> SymValue {
        let mag = n.magnitude();
        let v = expr::int_by_doubling::<SymValue, ()>(mag, self.zero(), a.clone(), |x, y| {
            Ok(self.add(x, y))
        })
        .expect("infallible");
        if n.is_negative() {
            self.neg(&v)
        } else {
            v
        }
    }
}

fn validate(spec: &SymSpec) -> Result<(), RingError> {
    match spec {
        SymSpec::Int => Ok(()),
        SymSpec::Poly { field, .. } => {
            if field.is_field() {
                Ok(())
            } else {
                Err(RingError::MalformedPreset(format!(
                    "polyring needs a finite field, got {}",
                    field.describe()
                )))
            }
        }
        SymSpec::Triangular { base, size } | SymSpec::FullMatrix { base, size } => {
            if *size == 0 {
                return Err(RingError::MalformedPreset("matrix size must be >= 1".into()));
            }
            validate(base)
        }
        SymSpec::Trivial { base } => validate(base),
    }
}

impl fmt::Display for SymRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl Algebra for SymRing {
    type Value = SymValue;
    type Error = RingError;

    fn from_int(&self, n: &BigUint) -> Result<SymValue, RingError> {
        let n = BigInt::from(n.clone());
        Ok(self.int_scale(&n, &self.one()))
    }

    fn ident(&self, name: &str) -> Result<SymValue, RingError> {
        self.gens
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| EvalError::UnknownName(name.to_string()).into())
    }

    fn add(&self, a: &SymValue, b: &SymValue) -> Result<SymValue, RingError> {
        Ok(SymRing::add(self, a, b))
    }

    fn neg(&self, a: &SymValue) -> Result<SymValue, RingError> {
        Ok(SymRing::neg(self, a))
    }

    fn mul(&self, a: &SymValue, b: &SymValue) -> Result<SymValue, RingError> {
        Ok(SymRing::mul(self, a, b))
    }

    fn matrix(&self, rows: &[Vec<Expr>]) -> Result<SymValue, RingError> {
        let bad = |m: &str| -> RingError { EvalError::BadMatrix(m.to_string()).into() };
        match &self.spec {
            SymSpec::Triangular { base, size } | SymSpec::FullMatrix { base, size } => {
                let n = *size;
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(bad(&format!("expected a {n}x{n} matrix")));
                }
                let inner = SymRing::new((**base).clone())?;
                let mut m = Vec::with_capacity(n * n);
                for (i, row) in rows.iter().enumerate() {
                    for (j, e) in row.iter().enumerate() {
                        let v = inner.eval(e)?;
                        if matches!(self.spec, SymSpec::Triangular { .. }) && i > j && v != inner.zero() {
                            return Err(bad("entry below the diagonal"));
                        }
                        m.push(v);
                    }
                }
                Ok(SymValue::Mat(m))
            }
            SymSpec::Trivial { base } => {
                if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
                    return Err(bad("expected [r, m; 0, r]"));
                }
                let inner = SymRing::new((**base).clone())?;
                let r = inner.eval(&rows[0][0])?;
                let m = inner.eval(&rows[0][1])?;
                if inner.eval(&rows[1][0])? != inner.zero() || inner.eval(&rows[1][1])? != r {
                    return Err(bad("expected [r, m; 0, r]"));
                }
                Ok(SymValue::Pair(Box::new(r), Box::new(m)))
            }
            _ => Err(bad("this ring has no matrix literals")),
        }
    }
}
