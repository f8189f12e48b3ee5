use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;

use super::nil::{compute_nil_data, NilData};
use super::{default_cap, Elem, RingError, RingSpec};
use crate::expr::{self, Algebra, EvalError, Expr};
use crate::par;

static NEXT_RING_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub cap: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { cap: default_cap() }
    }
}

/// A named canonical generator; map definitions give one image per generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub elem: Elem,
}

enum Layout {
    Modular(u32),
    Poly {
        base: Arc<FiniteRing>,
        var: String,
        /// Monic, constant term first.
        modulus: Vec<Elem>,
    },
    Matrix {
        base: Arc<FiniteRing>,
        size: usize,
        triangular: bool,
    },
    Trivial {
        base: Arc<FiniteRing>,
    },
    Product(Vec<Arc<FiniteRing>>),
}

/// A validated finite ring with materialized operation tables.
pub struct FiniteRing {
    id: u64,
    spec: RingSpec,
    card: u32,
    add_t: Vec<u32>,
    mul_t: Vec<u32>,
    neg_t: Vec<u32>,
    one: Elem,
    layout: Layout,
    gens: Vec<Generator>,
    is_field: bool,
    commutative: bool,
    nil: OnceLock<NilData>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({}, card {})", self.describe(), self.card)
    }
}

/// Validate `spec` and build its tables. Ring axioms are checked exhaustively.
pub fn build_ring(spec: &RingSpec, opts: &BuildOptions) -> Result<Arc<FiniteRing>, RingError> {
    let card = spec.cardinality();
    match card {
        Some(c) if c <= opts.cap as u128 => {}
        _ => {
            return Err(RingError::CardinalityOverCap {
                cardinality: card.map_or_else(|| "overflow".to_string(), |c| c.to_string()),
                cap: opts.cap,
            })
        }
    }
    let (layout, spec, is_field) = resolve_layout(spec, opts)?;
    let ring = assemble(spec, layout, is_field)?;
    ring.verify_axioms()?;
    Ok(Arc::new(ring))
}

fn resolve_layout(spec: &RingSpec, opts: &BuildOptions) -> Result<(Layout, RingSpec, bool), RingError> {
    let malformed = |m: &str| Err(RingError::MalformedPreset(m.to_string()));
    Ok(match spec {
        RingSpec::Zmod(n) => {
            if *n < 2 {
                return malformed("Zmod(n) needs n >= 2");
            }
            let field = is_prime(*n);
            (Layout::Modular(*n as u32), spec.clone(), field)
        }
        RingSpec::Gf {
            order,
            var,
            modulus,
        } => {
            let Some((p, k)) = prime_power(*order) else {
                return malformed(&format!("GF({order}) needs a prime power order"));
            };
            if k == 1 {
                if modulus.is_some() {
                    return malformed("prime fields take no modulus");
                }
                let norm = RingSpec::Gf {
                    order: *order,
                    var: None,
                    modulus: None,
                };
                (Layout::Modular(p as u32), norm, true)
            } else {
                let base = build_ring(&RingSpec::Zmod(p), opts)?;
                let var = var.clone().unwrap_or_else(|| "a".to_string());
                let coeffs: Vec<u64> = match modulus {
                    Some(m) => m.iter().map(|&c| c as u64).collect(),
                    None => least_irreducible(p, k),
                };
                if coeffs.len() != k as usize + 1 || coeffs.last() != Some(&1) {
                    return malformed(&format!(
                        "GF({order}) needs a monic modulus of degree {k}"
                    ));
                }
                if coeffs.iter().any(|&c| c >= p) {
                    return malformed("modulus coefficient out of range");
                }
                if !is_irreducible(p, &coeffs) {
                    return Err(RingError::NonIrreducibleModulus(format_mod_poly(
                        &base, &var, &coeffs,
                    )));
                }
                let norm = RingSpec::Gf {
                    order: *order,
                    var: Some(var.clone()),
                    modulus: Some(coeffs.iter().map(|&c| c as u32).collect()),
                };
                let modulus = coeffs.iter().map(|&c| Elem(c as u32)).collect();
                (Layout::Poly { base, var, modulus }, norm, true)
            }
        }
        RingSpec::Quotient { base, var, modulus } => {
            let base_ring = build_ring(base, opts)?;
            if modulus.len() < 2 {
                return malformed("quotient modulus must have degree >= 1");
            }
            if modulus.iter().any(|&c| c >= base_ring.card) {
                return malformed("modulus coefficient out of range");
            }
            if Elem(*modulus.last().expect("nonempty")) != base_ring.one {
                return malformed("quotient modulus must be monic");
            }
            let norm = RingSpec::Quotient {
                base: Box::new(base_ring.spec.clone()),
                var: var.clone(),
                modulus: modulus.clone(),
            };
            let layout = Layout::Poly {
                base: base_ring,
                var: var.clone(),
                modulus: modulus.iter().map(|&c| Elem(c)).collect(),
            };
            (layout, norm, false)
        }
        RingSpec::Triangular { base, size } | RingSpec::FullMatrix { base, size } => {
            if *size == 0 {
                return malformed("matrix size must be >= 1");
            }
            let base_ring = build_ring(base, opts)?;
            let triangular = matches!(spec, RingSpec::Triangular { .. });
            let norm = if triangular {
                RingSpec::triangular(base_ring.spec.clone(), *size)
            } else {
                RingSpec::matrices(base_ring.spec.clone(), *size)
            };
            let field = *size == 1 && base_ring.is_field;
            (
                Layout::Matrix {
                    base: base_ring,
                    size: *size,
                    triangular,
                },
                norm,
                field,
            )
        }
        RingSpec::TrivialExt { base } => {
            let base_ring = build_ring(base, opts)?;
            let norm = RingSpec::trivial(base_ring.spec.clone());
            (Layout::Trivial { base: base_ring }, norm, false)
        }
        RingSpec::Product(parts) => {
            if parts.is_empty() {
                return malformed("product of no rings");
            }
            let rings = parts
                .iter()
                .map(|p| build_ring(p, opts))
                .collect::<Result<Vec<_>, _>>()?;
            let norm = RingSpec::Product(rings.iter().map(|r| r.spec.clone()).collect());
            let field = rings.len() == 1 && rings[0].is_field;
            (Layout::Product(rings), norm, field)
        }
    })
}

impl Layout {
    fn radices(&self) -> Vec<u32> {
        match self {
            Layout::Modular(n) => vec![*n],
            Layout::Poly { base, modulus, .. } => vec![base.card; modulus.len() - 1],
            Layout::Matrix {
                base,
                size,
                triangular,
            } => {
                let k = if *triangular {
                    size * (size + 1) / 2
                } else {
                    size * size
                };
                vec![base.card; k]
            }
            Layout::Trivial { base } => vec![base.card; 2],
            Layout::Product(parts) => parts.iter().map(|p| p.card).collect(),
        }
    }
}


fn decode(radices: &[u32], code: u32) -> Vec<Elem> {
    let mut c = code;
    radices
        .iter()
        .map(|&r| {
            let d = c % r;
            c /= r;
            Elem(d)
        })
        .collect()
}

fn encode(radices: &[u32], coords: &[Elem]) -> Elem {
    let mut code = 0u32;
    for (r, c) in radices.iter().zip(coords).rev() {
        code = code * r + c.0;
    }
    Elem(code)
}

fn assemble(spec: RingSpec, layout: Layout, is_field: bool) -> Result<FiniteRing, RingError> {
    let radices = layout.radices();
    let card: u32 = radices.iter().product();
    let coords: Vec<Vec<Elem>> = (0..card).map(|c| decode(&radices, c)).collect();
    let n = card as usize;

    let add_c = |a: &[Elem], b: &[Elem]| -> Vec<Elem> { coord_add(&layout, a, b) };
    let mul_c = |a: &[Elem], b: &[Elem]| -> Vec<Elem> { coord_mul(&layout, a, b) };

    let rows: Vec<(Vec<u32>, Vec<u32>)> = par::map_range(n, |a| {
        let mut add_row = Vec::with_capacity(n);
        let mut mul_row = Vec::with_capacity(n);
        for b in 0..n {
            add_row.push(encode(&radices, &add_c(&coords[a], &coords[b])).0);
            mul_row.push(encode(&radices, &mul_c(&coords[a], &coords[b])).0);
        }
        (add_row, mul_row)
    });
    let mut add_t = Vec::with_capacity(n * n);
    let mut mul_t = Vec::with_capacity(n * n);
    for (ar, mr) in rows {
        add_t.extend(ar);
        mul_t.extend(mr);
    }
    let mut neg_t = vec![0u32; n];
    for a in 0..n {
        let b = (0..n)
            .find(|&b| add_t[a * n + b] == 0)
            .ok_or_else(|| RingError::AxiomViolation(format!("element #{a} has no negative")))?;
        neg_t[a] = b as u32;
    }
    let one = encode(&radices, &coord_one(&layout));
    let gens = generators(&layout, &radices)?;
    let commutative = (0..n).all(|a| (0..a).all(|b| mul_t[a * n + b] == mul_t[b * n + a]));
    Ok(FiniteRing {
        id: NEXT_RING_ID.fetch_add(1, Ordering::Relaxed),
        spec,
        card,
        add_t,
        mul_t,
        neg_t,
        one,
        layout,
        gens,
        is_field,
        commutative,
        nil: OnceLock::new(),
    })
}

fn coord_add(layout: &Layout, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    match layout {
        Layout::Modular(n) => vec![Elem((a[0].0 + b[0].0) % n)],
        Layout::Poly { base, .. } | Layout::Matrix { base, .. } | Layout::Trivial { base } => a
            .iter()
            .zip(b)
            .map(|(x, y)| base.add(*x, *y))
            .collect(),
        Layout::Product(parts) => parts
            .iter()
            .zip(a.iter().zip(b))
            .map(|(r, (x, y))| r.add(*x, *y))
            .collect(),
    }
}

fn coord_mul(layout: &Layout, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    match layout {
        Layout::Modular(n) => vec![Elem(((a[0].0 as u64 * b[0].0 as u64) % *n as u64) as u32)],
        Layout::Poly { base, modulus, .. } => {
            let d = modulus.len() - 1;
            let mut c = vec![Elem::ZERO; 2 * d - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    c[i + j] = base.add(c[i + j], base.mul(*x, *y));
                }
            }
            for k in (d..2 * d - 1).rev() {
                let t = c[k];
                if t == Elem::ZERO {
                    continue;
                }
                for (i, m) in modulus.iter().take(d).enumerate() {
                    c[k - d + i] = base.sub(c[k - d + i], base.mul(t, *m));
                }
                c[k] = Elem::ZERO;
            }
            c.truncate(d);
            c
        }
        Layout::Matrix {
            base,
            size,
            triangular,
        } => {
            let n = *size;
            let full = |v: &[Elem]| -> Vec<Elem> {
                let mut m = vec![Elem::ZERO; n * n];
                for i in 0..n {
                    for j in 0..n {
                        if let Some(s) = slot(n, *triangular, i, j) {
                            m[i * n + j] = v[s];
                        }
                    }
                }
                m
            };
            let (fa, fb) = (full(a), full(b));
            let mut out = vec![Elem::ZERO; a.len()];
            for i in 0..n {
                for j in 0..n {
                    if let Some(s) = slot(n, *triangular, i, j) {
                        let mut acc = Elem::ZERO;
                        for k in 0..n {
                            acc = base.add(acc, base.mul(fa[i * n + k], fb[k * n + j]));
                        }
                        out[s] = acc;
                    }
                }
            }
            out
        }
        Layout::Trivial { base } => {
            let (r1, m1, r2, m2) = (a[0], a[1], b[0], b[1]);
            vec![
                base.mul(r1, r2),
                base.add(base.mul(r1, m2), base.mul(m1, r2)),
            ]
        }
        Layout::Product(parts) => parts
            .iter()
            .zip(a.iter().zip(b))
            .map(|(r, (x, y))| r.mul(*x, *y))
            .collect(),
    }
}

/// Coordinate slot of matrix entry `(i, j)`; triangular storage is row-major over `i <= j`.
fn slot(size: usize, triangular: bool, i: usize, j: usize) -> Option<usize> {
    if !triangular {
        return Some(i * size + j);
    }
    if i > j {
        return None;
    }
    let before: usize = (0..i).map(|r| size - r).sum();
    Some(before + (j - i))
}

fn coord_one(layout: &Layout) -> Vec<Elem> {
    match layout {
        Layout::Modular(_) => vec![Elem(1)],
        Layout::Poly { base, modulus, .. } => {
            let mut v = vec![Elem::ZERO; modulus.len() - 1];
            v[0] = base.one;
            v
        }
        Layout::Matrix {
            base,
            size,
            triangular,
        } => {
            let k = if *triangular {
                size * (size + 1) / 2
            } else {
                size * size
            };
            let mut v = vec![Elem::ZERO; k];
            for i in 0..*size {
                v[slot(*size, *triangular, i, i).expect("diagonal")] = base.one;
            }
            v
        }
        Layout::Trivial { base } => vec![base.one, Elem::ZERO],
        Layout::Product(parts) => parts.iter().map(|p| p.one).collect(),
    }
}

fn scalar_coords(layout: &Layout, c: Elem) -> Vec<Elem> {
    match layout {
        Layout::Poly { modulus, .. } => {
            let mut v = vec![Elem::ZERO; modulus.len() - 1];
            v[0] = c;
            v
        }
        Layout::Matrix {
            size, triangular, ..
        } => {
            let k = if *triangular {
                size * (size + 1) / 2
            } else {
                size * size
            };
            let mut v = vec![Elem::ZERO; k];
            for i in 0..*size {
                v[slot(*size, *triangular, i, i).expect("diagonal")] = c;
            }
            v
        }
        Layout::Trivial { .. } => vec![c, Elem::ZERO],
        Layout::Modular(_) | Layout::Product(_) => unreachable!("no scalar embedding"),
    }
}

fn generators(layout: &Layout, radices: &[u32]) -> Result<Vec<Generator>, RingError> {
    let mut gens = Vec::new();
    let embed_base = |base: &FiniteRing, gens: &mut Vec<Generator>| {
        for g in &base.gens {
            gens.push(Generator {
                name: g.name.clone(),
                elem: encode(radices, &scalar_coords(layout, g.elem)),
            });
        }
    };
    match layout {
        Layout::Modular(_) => {}
        Layout::Poly { base, var, modulus } => {
            embed_base(base, &mut gens);
            let mut v = vec![Elem::ZERO; modulus.len() - 1];
            if v.len() >= 2 {
                v[1] = base.one;
            } else {
                // degree-1 modulus: the variable equals -m0
                v[0] = base.neg(modulus[0]);
            }
            gens.push(Generator {
                name: var.clone(),
                elem: encode(radices, &v),
            });
        }
        Layout::Matrix {
            base,
            size,
            triangular,
        } => {
            embed_base(base, &mut gens);
            let k = radices.len();
            for i in 0..*size {
                for j in 0..*size {
                    if let Some(s) = slot(*size, *triangular, i, j) {
                        let mut v = vec![Elem::ZERO; k];
                        v[s] = base.one;
                        gens.push(Generator {
                            name: format!("e{}{}", i + 1, j + 1),
                            elem: encode(radices, &v),
                        });
                    }
                }
            }
        }
        Layout::Trivial { base } => {
            embed_base(base, &mut gens);
            gens.push(Generator {
                name: "e".to_string(),
                elem: encode(radices, &[Elem::ZERO, base.one]),
            });
        }
        Layout::Product(parts) => {
            for (j, part) in parts.iter().enumerate() {
                let mut v: Vec<Elem> = vec![Elem::ZERO; parts.len()];
                v[j] = part.one;
                gens.push(Generator {
                    name: format!("u{}", j + 1),
                    elem: encode(radices, &v),
                });
                for g in &part.gens {
                    let mut v: Vec<Elem> = vec![Elem::ZERO; parts.len()];
                    v[j] = g.elem;
                    gens.push(Generator {
                        name: format!("{}_{}", g.name, j + 1),
                        elem: encode(radices, &v),
                    });
                }
            }
        }
    }
    for (i, g) in gens.iter().enumerate() {
        if gens[..i].iter().any(|h| h.name == g.name) {
            return Err(RingError::MalformedPreset(format!(
                "generator name `{}` is ambiguous in this construction",
                g.name
            )));
        }
    }
    Ok(gens)
}

impl FiniteRing {
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn card(&self) -> u32 {
        self.card
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn is_field(&self) -> bool {
        self.is_field
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.add_t[a.idx() * self.card as usize + b.idx()])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.mul_t[a.idx() * self.card as usize + b.idx()])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg_t[a.idx()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        let (mut acc, mut sq, mut k) = (self.one, a, k);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            k >>= 1;
        }
        acc
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.card).map(Elem)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, name: &str) -> Option<Elem> {
        self.gens.iter().find(|g| g.name == name).map(|g| g.elem)
    }

    /// Nilpotent data, computed on first use.
    pub fn nil_data(&self) -> &NilData {
        self.nil.get_or_init(|| compute_nil_data(self))
    }

    pub fn random_elem<R: rand::Rng>(&self, rng: &mut R) -> Elem {
        Elem(rng.gen_range(0..self.card))
    }

    fn radices(&self) -> Vec<u32> {
        self.layout.radices()
    }

    /// Coordinates of `e` over the construction's base ring(s).
    pub fn coordinates(&self, e: Elem) -> Vec<Elem> {
        decode(&self.radices(), e.0)
    }

    /// Sub-rings the coordinates live in (one entry per distinct base).
    pub fn base_rings(&self) -> Vec<Arc<FiniteRing>> {
        match &self.layout {
            Layout::Modular(_) => vec![],
            Layout::Poly { base, .. } | Layout::Matrix { base, .. } | Layout::Trivial { base } => {
                vec![Arc::clone(base)]
            }
            Layout::Product(parts) => parts.clone(),
        }
    }

    /// Canonical presentation-syntax description of the ring.
    pub fn describe(&self) -> String {
        match (&self.spec, &self.layout) {
            (RingSpec::Zmod(n), _) => format!("Zmod({n})"),
            (RingSpec::Gf { order, .. }, Layout::Modular(_)) => format!("GF({order})"),
            (RingSpec::Gf { order, .. }, Layout::Poly { base, var, modulus }) => {
                format!("GF({order}, {})", format_poly(base, var, modulus))
            }
            (RingSpec::Quotient { .. }, Layout::Poly { base, var, modulus }) => format!(
                "quotient({}, {var}, {})",
                base.describe(),
                format_poly(base, var, modulus)
            ),
            (RingSpec::Triangular { size, .. }, Layout::Matrix { base, .. }) => {
                format!("triangular({}, {size})", base.describe())
            }
            (RingSpec::FullMatrix { size, .. }, Layout::Matrix { base, .. }) => {
                format!("matrices({}, {size})", base.describe())
            }
            (RingSpec::TrivialExt { .. }, Layout::Trivial { base }) => {
                format!("trivial({})", base.describe())
            }
            (RingSpec::Product(_), Layout::Product(parts)) => format!(
                "product({})",
                parts
                    .iter()
                    .map(|p| p.describe())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
            _ => unreachable!("spec and layout agree by construction"),
        }
    }

    /// Canonical, re-parseable text for `e`.
    pub fn format(&self, e: Elem) -> String {
        let coords = self.coordinates(e);
        match &self.layout {
            Layout::Modular(_) => e.0.to_string(),
            Layout::Poly { base, var, .. } => format_poly(base, var, &coords),
            Layout::Matrix {
                base,
                size,
                triangular,
            } => {
                let n = *size;
                let rows: Vec<String> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| match slot(n, *triangular, i, j) {
                                Some(s) => base.format(coords[s]),
                                None => "0".to_string(),
                            })
                            .collect::<Vec<_>>()
                            .join(", ")
                    })
                    .collect();
                format!("[{}]", rows.join("; "))
            }
            Layout::Trivial { base } => {
                let (r, m) = (base.format(coords[0]), base.format(coords[1]));
                format!("[{r}, {m}; 0, {r}]")
            }
            Layout::Product(parts) => format!(
                "({})",
                parts
                    .iter()
                    .zip(&coords)
                    .map(|(p, c)| p.format(*c))
                    .collect::<Vec<_>>()
                    .join(" | ")
            ),
        }
    }

    pub fn eval(&self, e: &Expr) -> Result<Elem, RingError> {
        expr::eval(self, e)
    }

    pub fn parse_elem(&self, text: &str) -> Result<Elem, RingError> {
        self.eval(&expr::parse_expr(text)?)
    }

    fn verify_axioms(&self) -> Result<(), RingError> {
        let n = self.card as usize;
        for a in self.elements() {
            if self.mul(self.one, a) != a || self.mul(a, self.one) != a {
                return Err(RingError::AxiomViolation(format!(
                    "1 is not an identity for {}",
                    self.format(a)
                )));
            }
        }
        let bad = par::find_first(n, |a| {
            let a = Elem(a as u32);
            for b in self.elements() {
                let ab = self.mul(a, b);
                for c in self.elements() {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some(("associativity", b, c));
                    }
                    let bc = self.add(b, c);
                    if self.mul(a, bc) != self.add(ab, self.mul(a, c)) {
                        return Some(("left distributivity", b, c));
                    }
                    if self.mul(bc, a) != self.add(self.mul(b, a), self.mul(c, a)) {
                        return Some(("right distributivity", b, c));
                    }
                }
            }
            None
        });
        match bad {
            None => Ok(()),
            Some((a, (law, b, c))) => Err(RingError::AxiomViolation(format!(
                "{law} fails at ({}, {}, {})",
                self.format(Elem(a as u32)),
                self.format(b),
                self.format(c)
            ))),
        }
    }
}

fn format_poly(base: &FiniteRing, var: &str, coeffs: &[Elem]) -> String {
    let mut terms = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if *c == Elem::ZERO {
            continue;
        }
        let cs = base.format(*c);
        let pow = match i {
            0 => None,
            1 => Some(var.to_string()),
            _ => Some(format!("{var}^{i}")),
        };
        terms.push(match pow {
            None => cs,
            Some(p) if *c == base.one => p,
            Some(p) if cs.contains(' ') => format!("({cs})*{p}"),
            Some(p) => format!("{cs}*{p}"),
        });
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

fn format_mod_poly(base: &FiniteRing, var: &str, coeffs: &[u64]) -> String {
    let v: Vec<Elem> = coeffs.iter().map(|&c| Elem(c as u32)).collect();
    format_poly(base, var, &v)
}

impl Algebra for FiniteRing {
    type Value = Elem;
    type Error = RingError;

    fn from_int(&self, n: &BigUint) -> Result<Elem, RingError> {
        expr::int_by_doubling(n, Elem::ZERO, self.one, |a, b| Ok(self.add(*a, *b)))
    }

    fn ident(&self, name: &str) -> Result<Elem, RingError> {
        self.generator(name)
            .ok_or_else(|| EvalError::UnknownName(name.to_string()).into())
    }

    fn add(&self, a: &Elem, b: &Elem) -> Result<Elem, RingError> {
        Ok(FiniteRing::add(self, *a, *b))
    }

    fn neg(&self, a: &Elem) -> Result<Elem, RingError> {
        Ok(FiniteRing::neg(self, *a))
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Result<Elem, RingError> {
        Ok(FiniteRing::mul(self, *a, *b))
    }

    fn matrix(&self, rows: &[Vec<Expr>]) -> Result<Elem, RingError> {
        let bad = |m: String| -> RingError { EvalError::BadMatrix(m).into() };
        match &self.layout {
            Layout::Matrix {
                base,
                size,
                triangular,
            } => {
                let n = *size;
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(bad(format!("expected a {n}x{n} matrix")));
                }
                let mut v = vec![Elem::ZERO; self.radices().len()];
                for (i, row) in rows.iter().enumerate() {
                    for (j, e) in row.iter().enumerate() {
                        let x = base.eval(e)?;
                        match slot(n, *triangular, i, j) {
                            Some(s) => v[s] = x,
                            None if x == Elem::ZERO => {}
                            None => return Err(bad("entry below the diagonal".into())),
                        }
                    }
                }
                Ok(encode(&self.radices(), &v))
            }
            Layout::Trivial { base } => {
                if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
                    return Err(bad("expected [r, m; 0, r]".into()));
                }
                let r = base.eval(&rows[0][0])?;
                let m = base.eval(&rows[0][1])?;
                let low = base.eval(&rows[1][0])?;
                let r2 = base.eval(&rows[1][1])?;
                if low != Elem::ZERO || r2 != r {
                    return Err(bad("expected [r, m; 0, r]".into()));
                }
                Ok(encode(&self.radices(), &[r, m]))
            }
            _ => Err(bad("this ring has no matrix literals".into())),
        }
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut m, mut k) = (q, 0u32);
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

/// Remainder of `a` modulo monic `m` over `Z/p`, coefficients constant-first.
fn poly_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().expect("nonempty");
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(p: u64, f: &[u64]) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut g: Vec<u64> = (0..d).map(|i| (code / p.pow(i as u32)) % p).collect();
            g.push(1);
            if poly_rem(p, f, &g).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn least_irreducible(p: u64, k: u32) -> Vec<u64> {
    let count = p.pow(k);
    (0..count)
        .map(|code| {
            let mut g: Vec<u64> = (0..k).map(|i| (code / p.pow(i)) % p).collect();
            g.push(1);
            g
        })
        .find(|g| is_irreducible(p, g))
        .expect("irreducible polynomials exist in every degree")
}
