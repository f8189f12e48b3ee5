//! Endomorphisms and σ-derivations of a finite coefficient ring, stored as
//! full value tables, plus compatibility checking.

mod compat;
pub mod symbolic;

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::finring::{Elem, FiniteRing, RingError};

pub use compat::{
    check_compatibility, check_compatible_ideal, derived_law_suite, CheckMode, CompatLaw,
    CompatReport, CompatWitness, IdealCompatReport, LawClass, LawVerdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("not a ring homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("not a σ-derivation: {0}")]
    NotADerivation(String),
    #[error("no image given for generator `{0}`")]
    GeneratorImageMissing(String),
    #[error("`{0}` is not a generator of the ring")]
    UnknownGenerator(String),
    #[error("the canonical generators do not reach every element")]
    GeneratorsDoNotGenerate,
    #[error("maps live over different rings")]
    MixedRings,
    #[error("symbolic rings support only sampled checking")]
    SymbolicNeedsSampledMode,
    #[error("not a two-sided ideal: {0}")]
    NotAnIdeal(String),
    #[error("derived law fails: {0}")]
    LawViolation(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Ring endomorphism given by its full value table.
#[derive(Clone, Debug)]
pub struct RingMap {
    ring: Arc<FiniteRing>,
    name: String,
    table: Vec<Elem>,
    injective: bool,
}

/// σ-derivation: additive with `δ(ab) = σ(a)δ(b) + δ(a)b`.
#[derive(Clone, Debug)]
pub struct Derivation {
    ring: Arc<FiniteRing>,
    name: String,
    sigma: RingMap,
    table: Vec<Elem>,
}

impl RingMap {
    pub fn identity(ring: &Arc<FiniteRing>) -> Self {
        RingMap {
            ring: Arc::clone(ring),
            name: "id".into(),
            table: ring.elements().collect(),
            injective: true,
        }
    }

    /// Build from an arbitrary function, validating the homomorphism laws.
    pub fn from_fn(
        ring: &Arc<FiniteRing>,
        name: &str,
        f: impl Fn(Elem) -> Elem,
    ) -> Result<Self, MapError> {
        let table: Vec<Elem> = ring.elements().map(f).collect();
        let map = RingMap::from_table(ring, name, table);
        map.verify()?;
        Ok(map)
    }

    fn from_table(ring: &Arc<FiniteRing>, name: &str, table: Vec<Elem>) -> Self {
        let mut seen = vec![false; table.len()];
        let mut injective = true;
        for v in &table {
            injective &= !std::mem::replace(&mut seen[v.idx()], true);
        }
        RingMap {
            ring: Arc::clone(ring),
            name: name.to_string(),
            table,
            injective,
        }
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    #[inline]
    pub fn apply(&self, r: Elem) -> Elem {
        self.table[r.idx()]
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, v)| v.idx() == i)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &RingMap) -> RingMap {
        let table = other.table.iter().map(|&v| self.apply(v)).collect();
        RingMap::from_table(&self.ring, &format!("{}∘{}", self.name, other.name), table)
    }

    pub fn commutes_with(&self, other: &RingMap) -> bool {
        self.ring
            .elements()
            .all(|r| self.apply(other.apply(r)) == other.apply(self.apply(r)))
    }

    fn verify(&self) -> Result<(), MapError> {
        let r = &*self.ring;
        if self.apply(r.one()) != r.one() {
            return Err(MapError::NotAHomomorphism(format!(
                "1 maps to {}",
                r.format(self.apply(r.one()))
            )));
        }
        let bad = crate::par::find_first(r.card() as usize, |a| {
            let a = Elem(a as u32);
            r.elements().find_map(|b| {
                if self.apply(r.add(a, b)) != r.add(self.apply(a), self.apply(b)) {
                    Some((b, "+"))
                } else if self.apply(r.mul(a, b)) != r.mul(self.apply(a), self.apply(b)) {
                    Some((b, "*"))
                } else {
                    None
                }
            })
        });
        match bad {
            None => Ok(()),
            Some((a, (b, op))) => {
                let a = Elem(a as u32);
                Err(MapError::NotAHomomorphism(hom_witness(r, self, a, b, op)))
            }
        }
    }
}

fn hom_witness(r: &FiniteRing, m: &RingMap, a: Elem, b: Elem, op: &str) -> String {
    let (lhs, rhs) = if op == "+" {
        (m.apply(r.add(a, b)), r.add(m.apply(a), m.apply(b)))
    } else {
        (m.apply(r.mul(a, b)), r.mul(m.apply(a), m.apply(b)))
    };
    format!(
        "a = {}, b = {}: image of a{op}b is {} but images combine to {}",
        r.format(a),
        r.format(b),
        r.format(lhs),
        r.format(rhs)
    )
}

impl Derivation {
    pub fn zero(sigma: &RingMap) -> Self {
        Derivation {
            ring: Arc::clone(&sigma.ring),
            name: "0".into(),
            sigma: sigma.clone(),
            table: vec![Elem::ZERO; sigma.table.len()],
        }
    }

    pub fn from_fn(
        sigma: &RingMap,
        name: &str,
        f: impl Fn(Elem) -> Elem,
    ) -> Result<Self, MapError> {
        let d = Derivation {
            ring: Arc::clone(&sigma.ring),
            name: name.to_string(),
            sigma: sigma.clone(),
            table: sigma.ring.elements().map(f).collect(),
        };
        d.verify()?;
        Ok(d)
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn sigma(&self) -> &RingMap {
        &self.sigma
    }

    #[inline]
    pub fn apply(&self, r: Elem) -> Elem {
        self.table[r.idx()]
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|v| *v == Elem::ZERO)
    }

    fn leibniz(&self, a: Elem, b: Elem) -> Elem {
        let r = &*self.ring;
        r.add(
            r.mul(self.sigma.apply(a), self.apply(b)),
            r.mul(self.apply(a), b),
        )
    }

    fn verify(&self) -> Result<(), MapError> {
        let r = &*self.ring;
        let bad = crate::par::find_first(r.card() as usize, |a| {
            let a = Elem(a as u32);
            r.elements().find_map(|b| {
                if self.apply(r.add(a, b)) != r.add(self.apply(a), self.apply(b)) {
                    Some((b, false))
                } else if self.apply(r.mul(a, b)) != self.leibniz(a, b) {
                    Some((b, true))
                } else {
                    None
                }
            })
        });
        match bad {
            None => Ok(()),
            Some((a, (b, mul))) => {
                let a = Elem(a as u32);
                let msg = if mul {
                    format!(
                        "a = {}, b = {}: δ(ab) = {} but σ(a)δ(b) + δ(a)b = {}",
                        r.format(a),
                        r.format(b),
                        r.format(self.apply(r.mul(a, b))),
                        r.format(self.leibniz(a, b))
                    )
                } else {
                    format!(
                        "a = {}, b = {}: δ is not additive",
                        r.format(a),
                        r.format(b)
                    )
                };
                Err(MapError::NotADerivation(msg))
            }
        }
    }
}

fn resolve_images(
    ring: &FiniteRing,
    images: &[(String, Elem)],
) -> Result<Vec<(Elem, Elem)>, MapError> {
    let given: HashMap<&str, Elem> = images.iter().map(|(n, e)| (n.as_str(), *e)).collect();
    for (name, _) in images {
        if ring.generator(name).is_none() {
            return Err(MapError::UnknownGenerator(name.clone()));
        }
    }
    ring.generators()
        .iter()
        .map(|g| {
            given
                .get(g.name.as_str())
                .map(|img| (g.elem, *img))
                .ok_or_else(|| MapError::GeneratorImageMissing(g.name.clone()))
        })
        .collect()
}

/// Extend generator images to a full table by closing under `+`, `-`, `*`.
/// Conflicts found during closure and any law failure in the final
/// exhaustive check are reported as `NotAHomomorphism`.
pub fn build_map(
    ring: &Arc<FiniteRing>,
    name: &str,
    images: &[(String, Elem)],
) -> Result<RingMap, MapError> {
    let r = &**ring;
    let mut seeds = vec![(Elem::ZERO, Elem::ZERO), (r.one(), r.one())];
    seeds.extend(resolve_images(r, images)?);
    let table = close(r, &seeds, |_, _, fx, fy, op| match op {
        Op::Add => r.add(fx, fy),
        Op::Mul => r.mul(fx, fy),
        Op::Neg => r.neg(fx),
    })
    .map_err(|e| match e {
        Closure::Conflict(msg) => MapError::NotAHomomorphism(msg),
        Closure::Incomplete => MapError::GeneratorsDoNotGenerate,
    })?;
    let map = RingMap::from_table(ring, name, table);
    map.verify()?;
    Ok(map)
}

/// As [`build_map`], for a σ-derivation with `δ(0) = δ(1) = 0`.
pub fn build_derivation(
    ring: &Arc<FiniteRing>,
    name: &str,
    sigma: &RingMap,
    images: &[(String, Elem)],
) -> Result<Derivation, MapError> {
    if sigma.ring.id() != ring.id() {
        return Err(MapError::MixedRings);
    }
    let r = &**ring;
    let mut seeds = vec![(Elem::ZERO, Elem::ZERO), (r.one(), Elem::ZERO)];
    seeds.extend(resolve_images(r, images)?);
    let table = close(r, &seeds, |x, y, dx, dy, op| match op {
        Op::Add => r.add(dx, dy),
        Op::Mul => r.add(r.mul(sigma.apply(x), dy), r.mul(dx, y)),
        Op::Neg => r.neg(dx),
    })
    .map_err(|e| match e {
        Closure::Conflict(msg) => MapError::NotADerivation(msg),
        Closure::Incomplete => MapError::GeneratorsDoNotGenerate,
    })?;
    let d = Derivation {
        ring: Arc::clone(ring),
        name: name.to_string(),
        sigma: sigma.clone(),
        table,
    };
    d.verify()?;
    Ok(d)
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Mul,
    Neg,
}

enum Closure {
    Conflict(String),
    Incomplete,
}

/// Saturate a partial table from `seeds`. `rule(x, y, f(x), f(y), op)` gives
/// the forced value of `f(x op y)`.
fn close(
    r: &FiniteRing,
    seeds: &[(Elem, Elem)],
    rule: impl Fn(Elem, Elem, Elem, Elem, Op) -> Elem,
) -> Result<Vec<Elem>, Closure> {
    let mut table: Vec<Option<Elem>> = vec![None; r.card() as usize];
    let mut known: Vec<Elem> = Vec::new();
    let assign = |table: &mut Vec<Option<Elem>>,
                      known: &mut Vec<Elem>,
                      x: Elem,
                      v: Elem,
                      why: &dyn Fn() -> String|
     -> Result<(), Closure> {
        match table[x.idx()] {
            None => {
                table[x.idx()] = Some(v);
                known.push(x);
                Ok(())
            }
            Some(w) if w == v => Ok(()),
            Some(w) => Err(Closure::Conflict(format!(
                "{} is forced to both {} and {} ({})",
                r.format(x),
                r.format(w),
                r.format(v),
                why()
            ))),
        }
    };
    for &(x, v) in seeds {
        assign(&mut table, &mut known, x, v, &|| "generator images".into())?;
    }
    let mut i = 0;
    while i < known.len() {
        let x = known[i];
        let fx = table[x.idx()].expect("known");
        assign(&mut table, &mut known, r.neg(x), rule(x, x, fx, fx, Op::Neg), &|| {
            format!("negation of {}", r.format(x))
        })?;
        for j in 0..=i {
            let y = known[j];
            let fy = table[y.idx()].expect("known");
            for (p, q, fp, fq) in [(x, y, fx, fy), (y, x, fy, fx)] {
                assign(&mut table, &mut known, r.add(p, q), rule(p, q, fp, fq, Op::Add), &|| {
                    format!("sum of {} and {}", r.format(p), r.format(q))
                })?;
                assign(&mut table, &mut known, r.mul(p, q), rule(p, q, fp, fq, Op::Mul), &|| {
                    format!("product of {} and {}", r.format(p), r.format(q))
                })?;
            }
        }
        i += 1;
    }
    if known.len() < table.len() {
        return Err(Closure::Incomplete);
    }
    Ok(table.into_iter().map(|v| v.expect("complete")).collect())
}

/// All exponent vectors of length `n` with total degree at most `max_total`,
/// in graded order.
pub fn multi_indices(n: usize, max_total: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for total in 0..=max_total {
        let mut cur = vec![0u32; n];
        fill(&mut cur, 0, total, &mut out);
    }
    out
}

fn fill(cur: &mut Vec<u32>, at: usize, left: u32, out: &mut Vec<Vec<u32>>) {
    if at + 1 == cur.len() {
        cur[at] = left;
        out.push(cur.clone());
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for k in (0..=left).rev() {
        cur[at] = k;
        fill(cur, at + 1, left - k, out);
    }
    cur[at] = 0;
}

/// Table of `σ^α = σ₁^{α₁} ∘ ⋯ ∘ σₙ^{αₙ}`.
pub fn sigma_power(maps: &[RingMap], alpha: &[u32]) -> Vec<Elem> {
    let tables: Vec<&[Elem]> = maps.iter().map(|m| m.table()).collect();
    iterate_tables(&tables, maps[0].table.len(), alpha)
}

/// Table of `δ^β = δ₁^{β₁} ∘ ⋯ ∘ δₙ^{βₙ}`.
pub fn delta_power(derivs: &[Derivation], beta: &[u32]) -> Vec<Elem> {
    let tables: Vec<&[Elem]> = derivs.iter().map(|d| d.table()).collect();
    iterate_tables(&tables, derivs[0].table.len(), beta)
}

fn iterate_tables(tables: &[&[Elem]], card: usize, exps: &[u32]) -> Vec<Elem> {
    let mut t: Vec<Elem> = (0..card as u32).map(Elem).collect();
    for (table, &k) in tables.iter().zip(exps).rev() {
        for _ in 0..k {
            for v in t.iter_mut() {
                *v = table[v.idx()];
            }
        }
    }
    t
}
