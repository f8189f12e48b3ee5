//! Syntax tree of presentation files and its canonical printer.

use std::fmt;

use crate::expr::{Expr, Pos};

/// Source position carried by AST nodes. Positions never take part in
/// equality, so a reparsed canonical print compares equal to the original.
#[derive(Clone, Copy, Debug, Default)]
pub struct Span(pub Pos);

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingExpr {
    Zmod(u64),
    Gf(u64, Option<Expr>),
    Quotient(Box<RingExpr>, String, Expr),
    Triangular(Box<RingExpr>, usize),
    Matrices(Box<RingExpr>, usize),
    Trivial(Box<RingExpr>),
    Product(Vec<RingExpr>),
    Int,
    Polyring(Box<RingExpr>, String),
    Ref(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    pub generator: String,
    pub value: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarRule {
    pub var: String,
    pub sigma: String,
    pub delta: Option<String>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadRule {
    pub left: String,
    pub right: String,
    pub rhs: Expr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Ring {
        name: String,
        value: RingExpr,
        span: Span,
    },
    Endo {
        name: String,
        ring: String,
        images: Vec<Image>,
        span: Span,
    },
    Deriv {
        name: String,
        ring: String,
        sigma: String,
        images: Vec<Image>,
        span: Span,
    },
    Extension {
        name: String,
        ring: String,
        vars: Vec<String>,
        rules: Vec<VarRule>,
        quads: Vec<QuadRule>,
        span: Span,
    },
    /// `use NAME;` splices a catalog preset in place.
    Use { preset: String, span: Span },
    /// `active NAME;` picks the extension commands act on.
    Active { name: String, span: Span },
}

impl Stmt {
    pub fn span(&self) -> Span {
        match self {
            Stmt::Ring { span, .. }
            | Stmt::Endo { span, .. }
            | Stmt::Deriv { span, .. }
            | Stmt::Extension { span, .. }
            | Stmt::Use { span, .. }
            | Stmt::Active { span, .. } => *span,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FileAst {
    pub stmts: Vec<Stmt>,
}

impl fmt::Display for RingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingExpr::Zmod(n) => write!(f, "Zmod({n})"),
            RingExpr::Gf(q, None) => write!(f, "GF({q})"),
            RingExpr::Gf(q, Some(m)) => write!(f, "GF({q}, {m})"),
            RingExpr::Quotient(b, v, m) => write!(f, "quotient({b}, {v}, {m})"),
            RingExpr::Triangular(b, n) => write!(f, "triangular({b}, {n})"),
            RingExpr::Matrices(b, n) => write!(f, "matrices({b}, {n})"),
            RingExpr::Trivial(b) => write!(f, "trivial({b})"),
            RingExpr::Product(parts) => {
                write!(f, "product(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            RingExpr::Int => write!(f, "Int"),
            RingExpr::Polyring(b, v) => write!(f, "polyring({b}, {v})"),
            RingExpr::Ref(name) => write!(f, "{name}"),
        }
    }
}

fn write_images(f: &mut fmt::Formatter<'_>, images: &[Image]) -> fmt::Result {
    if images.is_empty() {
        return write!(f, "{{ }}");
    }
    write!(f, "{{ ")?;
    for (i, im) in images.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{} -> {}", im.generator, im.value)?;
    }
    write!(f, " }}")
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Ring { name, value, .. } => write!(f, "ring {name} = {value};"),
            Stmt::Endo { name, ring, images, .. } => {
                write!(f, "endo {name} on {ring} ")?;
                write_images(f, images)
            }
            Stmt::Deriv {
                name, ring, sigma, images, ..
            } => {
                write!(f, "deriv {name} on {ring} sigma {sigma} ")?;
                write_images(f, images)
            }
            Stmt::Extension {
                name,
                ring,
                vars,
                rules,
                quads,
                ..
            } => {
                writeln!(f, "extension {name} over {ring} {{")?;
                writeln!(f, "  vars {};", vars.join(", "))?;
                for r in rules {
                    write!(f, "  {}: sigma {}", r.var, r.sigma)?;
                    if let Some(d) = &r.delta {
                        write!(f, ", delta {d}")?;
                    }
                    writeln!(f, ";")?;
                }
                for q in quads {
                    writeln!(f, "  {}*{} = {};", q.left, q.right, q.rhs)?;
                }
                write!(f, "}}")
            }
            Stmt::Use { preset, .. } => write!(f, "use {preset};"),
            Stmt::Active { name, .. } => write!(f, "active {name};"),
        }
    }
}

impl fmt::Display for FileAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stmts {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
