//! Name resolution and construction of rings, maps and extensions from a
//! parsed presentation file.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;

use super::ast::{FileAst, Image, RingExpr, Span, Stmt};
use super::parser::parse_ast;
use super::presets;
use super::{DeclError, ShellError};
use crate::expr::{self, Algebra, Expr, Pos};
use crate::finring::symbolic::{SymRing, SymSpec, SymValue};
use crate::finring::{build_ring, BuildOptions, Elem, FiniteRing, RingSpec};
use crate::ringmaps::symbolic::{SymDerivation, SymMap};
use crate::ringmaps::{build_derivation, build_map, Derivation, RingMap};
use crate::spbwalg::{ExtOptions, Extension, QuadRelation, MAX_VARS};

/// Name reserved for the identity endomorphism of any ring.
pub const IDENTITY: &str = "id";

#[derive(Clone, Debug)]
pub enum RingValue {
    Finite(Arc<FiniteRing>),
    Symbolic(Arc<SymRing>),
}

impl RingValue {
    pub fn describe(&self) -> String {
        match self {
            RingValue::Finite(r) => r.describe(),
            RingValue::Symbolic(r) => r.describe(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum MapValue {
    Endo(RingMap),
    Deriv(Derivation),
    SymEndo(SymMap),
    SymDeriv(SymDerivation),
}

#[derive(Clone, Debug)]
pub struct MapDecl {
    pub name: String,
    pub ring: String,
    pub value: MapValue,
}

#[derive(Clone, Debug)]
pub struct ElabOptions {
    pub build: BuildOptions,
    pub ext: ExtOptions,
}

impl Default for ElabOptions {
    fn default() -> Self {
        ElabOptions {
            build: BuildOptions::default(),
            ext: ExtOptions::default(),
        }
    }
}

/// A resolved presentation: everything declared, in declaration order.
#[derive(Clone, Debug, Default)]
pub struct Presentation {
    pub ast: FileAst,
    pub rings: Vec<(String, RingValue)>,
    pub maps: Vec<MapDecl>,
    pub extensions: Vec<(String, Arc<Extension>)>,
    pub active: Option<String>,
}

impl Presentation {
    pub fn ring(&self, name: &str) -> Option<&RingValue> {
        self.rings.iter().find(|(n, _)| n == name).map(|(_, r)| r)
    }

    pub fn extension(&self, name: &str) -> Option<&Arc<Extension>> {
        self.extensions.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    /// The extension named by `active`, else the last one declared.
    pub fn active_extension(&self) -> Option<&Arc<Extension>> {
        match &self.active {
            Some(n) => self.extension(n),
            None => self.extensions.last().map(|(_, e)| e),
        }
    }

    /// Coefficient ring of the active extension, else the last ring declared.
    pub fn active_ring(&self) -> Option<(String, RingValue)> {
        if let Some(ext) = self.active_extension() {
            let found = self
                .rings
                .iter()
                .find(|(_, r)| matches!(r, RingValue::Finite(f) if f.id() == ext.ring().id()));
            if let Some((n, r)) = found {
                return Some((n.clone(), r.clone()));
            }
        }
        self.rings.last().cloned()
    }

    /// Maps declared on the ring called `ring`.
    pub fn maps_on(&self, ring: &str) -> Vec<&MapDecl> {
        self.maps.iter().filter(|m| m.ring == ring).collect()
    }
}

/// Dense univariate polynomials over a finite ring, for moduli.
struct DensePoly<'a> {
    base: &'a FiniteRing,
    var: &'a str,
}

impl DensePoly<'_> {
    fn trim(mut v: Vec<Elem>) -> Vec<Elem> {
        while v.last() == Some(&Elem::ZERO) {
            v.pop();
        }
        v
    }
}

impl Algebra for DensePoly<'_> {
    type Value = Vec<Elem>;
    type Error = DeclError;

    fn from_int(&self, n: &BigUint) -> Result<Vec<Elem>, DeclError> {
        let c = self.base.eval(&Expr::Int(n.clone()))?;
        Ok(Self::trim(vec![c]))
    }

    fn ident(&self, name: &str) -> Result<Vec<Elem>, DeclError> {
        if name == self.var {
            return Ok(vec![Elem::ZERO, self.base.one()]);
        }
        Ok(Self::trim(vec![self.base.eval(&Expr::ident(name))?]))
    }

    fn add(&self, a: &Vec<Elem>, b: &Vec<Elem>) -> Result<Vec<Elem>, DeclError> {
        let n = a.len().max(b.len());
        let get = |v: &Vec<Elem>, i: usize| v.get(i).copied().unwrap_or(Elem::ZERO);
        Ok(Self::trim((0..n).map(|i| self.base.add(get(a, i), get(b, i))).collect()))
    }

    fn neg(&self, a: &Vec<Elem>) -> Result<Vec<Elem>, DeclError> {
        Ok(a.iter().map(|&c| self.base.neg(c)).collect())
    }

    fn mul(&self, a: &Vec<Elem>, b: &Vec<Elem>) -> Result<Vec<Elem>, DeclError> {
        if a.is_empty() || b.is_empty() {
            return Ok(Vec::new());
        }
        let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.base.add(out[i + j], self.base.mul(x, y));
            }
        }
        Ok(Self::trim(out))
    }
}

fn modulus_codes(base: &FiniteRing, var: &str, e: &Expr) -> Result<Vec<u32>, DeclError> {
    let v = expr::eval(&DensePoly { base, var }, e)?;
    Ok(v.into_iter().map(|c| c.0).collect())
}

/// Standard-form right-hand sides of quadratic relations: constants on the
/// left, variables in ascending order.
struct QuadAlg<'a> {
    ring: &'a FiniteRing,
    vars: &'a [String],
}

type StdPoly = BTreeMap<Vec<u32>, Elem>;

impl QuadAlg<'_> {
    fn constant(&self, c: Elem) -> StdPoly {
        let mut m = StdPoly::new();
        if c != Elem::ZERO {
            m.insert(vec![0; self.vars.len()], c);
        }
        m
    }

    fn is_constant(p: &StdPoly) -> bool {
        p.keys().all(|k| k.iter().all(|&e| e == 0))
    }
}

fn first_var(m: &[u32]) -> Option<usize> {
    m.iter().position(|&e| e > 0)
}

fn last_var(m: &[u32]) -> Option<usize> {
    m.iter().rposition(|&e| e > 0)
}

impl Algebra for QuadAlg<'_> {
    type Value = StdPoly;
    type Error = DeclError;

    fn from_int(&self, n: &BigUint) -> Result<StdPoly, DeclError> {
        Ok(self.constant(self.ring.eval(&Expr::Int(n.clone()))?))
    }

    fn ident(&self, name: &str) -> Result<StdPoly, DeclError> {
        if let Some(i) = self.vars.iter().position(|v| v == name) {
            let mut k = vec![0; self.vars.len()];
            k[i] = 1;
            return Ok(StdPoly::from([(k, self.ring.one())]));
        }
        Ok(self.constant(self.ring.eval(&Expr::ident(name))?))
    }

    fn add(&self, a: &StdPoly, b: &StdPoly) -> Result<StdPoly, DeclError> {
        let mut out = a.clone();
        for (k, &c) in b {
            let e = out.entry(k.clone()).or_insert(Elem::ZERO);
            *e = self.ring.add(*e, c);
            if *e == Elem::ZERO {
                out.remove(k);
            }
        }
        Ok(out)
    }

    fn neg(&self, a: &StdPoly) -> Result<StdPoly, DeclError> {
        Ok(a.iter().map(|(k, &c)| (k.clone(), self.ring.neg(c))).collect())
    }

    fn mul(&self, a: &StdPoly, b: &StdPoly) -> Result<StdPoly, DeclError> {
        let a_const = Self::is_constant(a);
        let mut out = StdPoly::new();
        for (ka, &ca) in a {
            for (kb, &cb) in b {
                if !a_const && cb != self.ring.one() {
                    return Err(DeclError::Invalid(
                        "write coefficients to the left of variables in relations".into(),
                    ));
                }
                if let (Some(l), Some(f)) = (last_var(ka), first_var(kb)) {
                    if l > f {
                        return Err(DeclError::Invalid(format!(
                            "relation right-hand sides must be in standard order (`{}` before `{}`)",
                            self.vars[f], self.vars[l]
                        )));
                    }
                }
                let k: Vec<u32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
                let c = self.ring.mul(ca, cb);
                let term = StdPoly::from([(k, c)]);
                out = self.add(&out, &term)?;
            }
        }
        Ok(out)
    }

    fn matrix(&self, rows: &[Vec<Expr>]) -> Result<StdPoly, DeclError> {
        Ok(self.constant(self.ring.eval(&Expr::Matrix(rows.to_vec()))?))
    }
}

fn quad_relation(ring: &FiniteRing, vars: &[String], j: usize, i: usize, rhs: &Expr) -> Result<QuadRelation, DeclError> {
    let p = expr::eval(&QuadAlg { ring, vars }, rhs)?;
    let n = vars.len();
    let mut rel = QuadRelation {
        d: Elem::ZERO,
        r0: Elem::ZERO,
        lin: vec![Elem::ZERO; n],
    };
    for (k, c) in p {
        let deg: u32 = k.iter().sum();
        match deg {
            0 => rel.r0 = c,
            1 => rel.lin[first_var(&k).expect("degree one")] = c,
            2 if k[i] == 1 && k[j] == 1 => rel.d = c,
            _ => {
                let mono: Vec<String> = k
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| if e == 1 { vars[v].clone() } else { format!("{}^{e}", vars[v]) })
                    .collect();
                return Err(DeclError::Invalid(format!(
                    "term `{}` is not allowed: the right side of {}*{} must be d*{}*{} plus terms of degree at most one",
                    mono.join("*"),
                    vars[j],
                    vars[i],
                    vars[i],
                    vars[j]
                )));
            }
        }
    }
    Ok(rel)
}

struct Env {
    opts: ElabOptions,
    out: Presentation,
    names: BTreeMap<String, Pos>,
}

impl Env {
    fn declare(&mut self, name: &str, span: Span) -> Result<(), ShellError> {
        if name == IDENTITY || self.names.contains_key(name) {
            return Err(ShellError::DuplicateDeclaration {
                name: name.to_string(),
                pos: span.0,
            });
        }
        self.names.insert(name.to_string(), span.0);
        Ok(())
    }

    fn unresolved(name: &str, span: Span) -> ShellError {
        ShellError::UnresolvedName {
            name: name.to_string(),
            pos: span.0,
        }
    }

    fn ring(&self, name: &str, span: Span) -> Result<RingValue, ShellError> {
        self.out.ring(name).cloned().ok_or_else(|| Self::unresolved(name, span))
    }

    fn finite_ring(&self, name: &str, span: Span) -> Result<Arc<FiniteRing>, ShellError> {
        match self.ring(name, span)? {
            RingValue::Finite(r) => Ok(r),
            RingValue::Symbolic(r) => Err(decl(
                span,
                name,
                DeclError::Invalid(format!("{} is symbolic; this needs a finite ring", r.describe())),
            )),
        }
    }

    fn map(&self, name: &str, span: Span) -> Result<&MapDecl, ShellError> {
        self.out
            .maps
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| Self::unresolved(name, span))
    }
}

fn decl(span: Span, name: &str, e: impl Into<DeclError>) -> ShellError {
    ShellError::Declaration {
        pos: span.0,
        name: name.to_string(),
        source: Box::new(e.into()),
    }
}

enum SpecValue {
    Finite(RingSpec),
    Sym(SymSpec),
}

fn smallest_prime_factor(n: u64) -> u64 {
    (2..).take_while(|p| p * p <= n).find(|p| n % p == 0).unwrap_or(n)
}

fn spec_of(env: &Env, e: &RingExpr, span: Span, name: &str) -> Result<SpecValue, ShellError> {
    let finite = |v: SpecValue, what: &str| match v {
        SpecValue::Finite(s) => Ok(s),
        SpecValue::Sym(_) => Err(decl(
            span,
            name,
            DeclError::Invalid(format!("{what} needs a finite base ring")),
        )),
    };
    let build = |s: &RingSpec| build_ring(s, &env.opts.build).map_err(|err| decl(span, name, err));
    Ok(match e {
        RingExpr::Zmod(n) => SpecValue::Finite(RingSpec::Zmod(*n)),
        RingExpr::Gf(q, None) => SpecValue::Finite(RingSpec::gf(*q)),
        RingExpr::Gf(q, Some(m)) => {
            let idents = m.idents();
            if idents.len() != 1 {
                return Err(decl(
                    span,
                    name,
                    DeclError::Invalid("a GF modulus must be a polynomial in exactly one variable".into()),
                ));
            }
            let prime = build(&RingSpec::Zmod(smallest_prime_factor(*q)))?;
            let codes = modulus_codes(&prime, &idents[0], m).map_err(|err| decl(span, name, err))?;
            SpecValue::Finite(RingSpec::Gf {
                order: *q,
                var: Some(idents[0].clone()),
                modulus: Some(codes),
            })
        }
        RingExpr::Quotient(b, var, m) => {
            let base = finite(spec_of(env, b, span, name)?, "quotient")?;
            let ring = build(&base)?;
            let codes = modulus_codes(&ring, var, m).map_err(|err| decl(span, name, err))?;
            SpecValue::Finite(RingSpec::quotient(base, var, codes))
        }
        RingExpr::Triangular(b, n) | RingExpr::Matrices(b, n) => {
            let tri = matches!(e, RingExpr::Triangular(..));
            match spec_of(env, b, span, name)? {
                SpecValue::Finite(s) if tri => SpecValue::Finite(RingSpec::triangular(s, *n)),
                SpecValue::Finite(s) => SpecValue::Finite(RingSpec::matrices(s, *n)),
                SpecValue::Sym(s) if tri => SpecValue::Sym(SymSpec::Triangular {
                    base: Box::new(s),
                    size: *n,
                }),
                SpecValue::Sym(s) => SpecValue::Sym(SymSpec::FullMatrix {
                    base: Box::new(s),
                    size: *n,
                }),
            }
        }
        RingExpr::Trivial(b) => match spec_of(env, b, span, name)? {
            SpecValue::Finite(s) => SpecValue::Finite(RingSpec::trivial(s)),
            SpecValue::Sym(s) => SpecValue::Sym(SymSpec::Trivial { base: Box::new(s) }),
        },
        RingExpr::Product(parts) => {
            let mut specs = Vec::new();
            for p in parts {
                specs.push(finite(spec_of(env, p, span, name)?, "product")?);
            }
            SpecValue::Finite(RingSpec::Product(specs))
        }
        RingExpr::Int => SpecValue::Sym(SymSpec::Int),
        RingExpr::Polyring(b, var) => {
            let base = finite(spec_of(env, b, span, name)?, "polyring")?;
            SpecValue::Sym(SymSpec::Poly {
                field: build(&base)?,
                var: var.clone(),
            })
        }
        RingExpr::Ref(r) => match env.ring(r, span)? {
            RingValue::Finite(f) => SpecValue::Finite(f.spec().clone()),
            RingValue::Symbolic(s) => SpecValue::Sym(s.spec().clone()),
        },
    })
}

fn finite_images(ring: &FiniteRing, images: &[Image]) -> Result<Vec<(String, Elem)>, DeclError> {
    images
        .iter()
        .map(|im| Ok((im.generator.clone(), ring.eval(&im.value)?)))
        .collect()
}

fn sym_images(ring: &SymRing, images: &[Image]) -> Result<Vec<(String, SymValue)>, DeclError> {
    images
        .iter()
        .map(|im| Ok((im.generator.clone(), ring.eval(&im.value)?)))
        .collect()
}

fn check_duplicate_images(images: &[Image], span: Span, name: &str) -> Result<(), ShellError> {
    for (k, im) in images.iter().enumerate() {
        if images[..k].iter().any(|o| o.generator == im.generator) {
            return Err(decl(
                span,
                name,
                DeclError::Invalid(format!("generator `{}` has two images", im.generator)),
            ));
        }
    }
    Ok(())
}

fn sigma_named(env: &Env, name: &str, ring: &Arc<FiniteRing>, span: Span) -> Result<RingMap, ShellError> {
    if name == IDENTITY {
        return Ok(RingMap::identity(ring));
    }
    match &env.map(name, span)?.value {
        MapValue::Endo(m) if m.ring().id() == ring.id() => Ok(m.clone()),
        _ => Err(decl(
            span,
            name,
            DeclError::Invalid(format!("`{name}` is not an endomorphism of {}", ring.describe())),
        )),
    }
}

fn elaborate_stmt(env: &mut Env, stmt: &Stmt, stack: &mut Vec<String>) -> Result<(), ShellError> {
    match stmt {
        Stmt::Use { preset, span } => {
            if stack.contains(preset) {
                return Err(decl(*span, preset, DeclError::Invalid("presets include each other in a cycle".into())));
            }
            let text = presets::source(preset).ok_or_else(|| ShellError::UnknownPreset(preset.clone()))?;
            let ast = parse_ast(text)?;
            stack.push(preset.clone());
            for s in &ast.stmts {
                elaborate_stmt(env, s, stack)?;
            }
            stack.pop();
        }
        Stmt::Active { name, span } => {
            if env.out.extension(name).is_none() {
                return Err(Env::unresolved(name, *span));
            }
            env.out.active = Some(name.clone());
        }
        Stmt::Ring { name, value, span } => {
            env.declare(name, *span)?;
            let v = match spec_of(env, value, *span, name)? {
                SpecValue::Finite(s) => {
                    RingValue::Finite(build_ring(&s, &env.opts.build).map_err(|e| decl(*span, name, e))?)
                }
                SpecValue::Sym(s) => RingValue::Symbolic(Arc::new(SymRing::new(s).map_err(|e| decl(*span, name, e))?)),
            };
            env.out.rings.push((name.clone(), v));
        }
        Stmt::Endo {
            name,
            ring,
            images,
            span,
        } => {
            let rv = env.ring(ring, *span)?;
            env.declare(name, *span)?;
            check_duplicate_images(images, *span, name)?;
            let value = match rv {
                RingValue::Finite(r) => {
                    let imgs = finite_images(&r, images).map_err(|e| decl(*span, name, e))?;
                    MapValue::Endo(build_map(&r, name, &imgs).map_err(|e| decl(*span, name, e))?)
                }
                RingValue::Symbolic(r) => {
                    let imgs = sym_images(&r, images).map_err(|e| decl(*span, name, e))?;
                    MapValue::SymEndo(SymMap::build(&r, name, &imgs).map_err(|e| decl(*span, name, e))?)
                }
            };
            env.out.maps.push(MapDecl {
                name: name.clone(),
                ring: ring.clone(),
                value,
            });
        }
        Stmt::Deriv {
            name,
            ring,
            sigma,
            images,
            span,
        } => {
            let rv = env.ring(ring, *span)?;
            if sigma != IDENTITY {
                env.map(sigma, *span)?;
            }
            env.declare(name, *span)?;
            check_duplicate_images(images, *span, name)?;
            let value = match rv {
                RingValue::Finite(r) => {
                    let s = sigma_named(env, sigma, &r, *span)?;
                    let imgs = finite_images(&r, images).map_err(|e| decl(*span, name, e))?;
                    MapValue::Deriv(build_derivation(&r, name, &s, &imgs).map_err(|e| decl(*span, name, e))?)
                }
                RingValue::Symbolic(r) => {
                    let s = if sigma == IDENTITY {
                        let gens: Vec<(String, SymValue)> = r.generators().to_vec();
                        SymMap::build(&r, IDENTITY, &gens).map_err(|e| decl(*span, name, e))?
                    } else {
                        match &env.map(sigma, *span)?.value {
                            MapValue::SymEndo(m) => m.clone(),
                            _ => {
                                return Err(decl(
                                    *span,
                                    name,
                                    DeclError::Invalid(format!("`{sigma}` is not an endomorphism of {ring}")),
                                ))
                            }
                        }
                    };
                    let imgs = sym_images(&r, images).map_err(|e| decl(*span, name, e))?;
                    MapValue::SymDeriv(SymDerivation::build(&s, name, &imgs).map_err(|e| decl(*span, name, e))?)
                }
            };
            env.out.maps.push(MapDecl {
                name: name.clone(),
                ring: ring.clone(),
                value,
            });
        }
        Stmt::Extension {
            name,
            ring,
            vars,
            rules,
            quads,
            span,
        } => {
            let r = env.finite_ring(ring, *span)?;
            env.declare(name, *span)?;
            if vars.len() > MAX_VARS {
                return Err(decl(
                    *span,
                    name,
                    DeclError::Invalid(format!("at most {MAX_VARS} variables are supported")),
                ));
            }
            let mut sigmas: Vec<RingMap> = vec![RingMap::identity(&r); vars.len()];
            let mut deltas: Vec<Option<Derivation>> = vec![None; vars.len()];
            let mut ruled = vec![false; vars.len()];
            for rule in rules {
                let Some(i) = vars.iter().position(|v| *v == rule.var) else {
                    return Err(Env::unresolved(&rule.var, rule.span));
                };
                if ruled[i] {
                    return Err(ShellError::DuplicateDeclaration {
                        name: format!("rule for {}", rule.var),
                        pos: rule.span.0,
                    });
                }
                ruled[i] = true;
                sigmas[i] = sigma_named(env, &rule.sigma, &r, rule.span)?;
                if let Some(d) = &rule.delta {
                    match &env.map(d, rule.span)?.value {
                        MapValue::Deriv(dv) if dv.ring().id() == r.id() => deltas[i] = Some(dv.clone()),
                        _ => {
                            return Err(decl(
                                rule.span,
                                d,
                                DeclError::Invalid(format!("`{d}` is not a σ-derivation of {ring}")),
                            ))
                        }
                    }
                }
            }
            let mut rels = Vec::new();
            for q in quads {
                let j = vars
                    .iter()
                    .position(|v| *v == q.left)
                    .ok_or_else(|| Env::unresolved(&q.left, q.span))?;
                let i = vars
                    .iter()
                    .position(|v| *v == q.right)
                    .ok_or_else(|| Env::unresolved(&q.right, q.span))?;
                if j <= i {
                    return Err(ShellError::RelationNotLowerTriangular {
                        relation: format!("{}*{}", q.left, q.right),
                        pos: q.span.0,
                    });
                }
                let rel = quad_relation(&r, vars, j, i, &q.rhs).map_err(|e| decl(q.span, name, e))?;
                rels.push((j, i, rel));
            }
            let ext = Extension::new(name, &r, vars.clone(), sigmas, deltas, rels, &env.opts.ext)
                .map_err(|e| decl(*span, name, e))?;
            env.out.extensions.push((name.clone(), ext));
        }
    }
    Ok(())
}

/// Parse and resolve a presentation file.
pub fn elaborate(text: &str, opts: &ElabOptions) -> Result<Presentation, ShellError> {
    let ast = parse_ast(text)?;
    elaborate_ast(ast, opts)
}

pub fn elaborate_ast(ast: FileAst, opts: &ElabOptions) -> Result<Presentation, ShellError> {
    let mut env = Env {
        opts: opts.clone(),
        out: Presentation::default(),
        names: BTreeMap::new(),
    };
    let mut stack = Vec::new();
    for s in &ast.stmts {
        elaborate_stmt(&mut env, s, &mut stack)?;
    }
    env.out.ast = ast;
    Ok(env.out)
}
