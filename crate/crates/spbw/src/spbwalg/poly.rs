use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;

use super::ext::{ExtError, Extension, Terms};
use super::monomial::{monomials_up_to, Monomial};
use crate::expr::{self, Algebra, EvalError, Expr};
use crate::finring::{Elem, FiniteRing};

/// Element of an extension in normal form `Σ c_α x^α` with coefficients
/// on the left. Terms are stored ascending and never carry zero.
#[derive(Clone)]
pub struct SkewPoly {
    ext: Arc<Extension>,
    terms: Terms,
}

/// Leading data of a polynomial; the zero polynomial has no leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingData {
    pub lm: Option<Monomial>,
    pub lc: Elem,
    pub deg: u32,
    pub exp: Vec<u32>,
}

pub(crate) fn accumulate(ring: &FiniteRing, acc: &mut BTreeMap<Monomial, Elem>, m: Monomial, c: Elem) {
    if c == Elem::ZERO {
        return;
    }
    let slot = acc.entry(m).or_insert(Elem::ZERO);
    *slot = ring.add(*slot, c);
}

pub(crate) fn finish(acc: BTreeMap<Monomial, Elem>) -> Terms {
    acc.into_iter().filter(|(_, c)| *c != Elem::ZERO).collect()
}

impl SkewPoly {
    pub(crate) fn from_sorted(ext: &Arc<Extension>, terms: Terms) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| *c != Elem::ZERO));
        SkewPoly {
            ext: Arc::clone(ext),
            terms,
        }
    }

    pub fn zero(ext: &Arc<Extension>) -> Self {
        SkewPoly::from_sorted(ext, Vec::new())
    }

    pub fn one(ext: &Arc<Extension>) -> Self {
        SkewPoly::constant(ext, ext.ring().one())
    }

    pub fn constant(ext: &Arc<Extension>, r: Elem) -> Self {
        SkewPoly::monomial(ext, Monomial::ONE, r)
    }

    pub fn var(ext: &Arc<Extension>, i: usize) -> Self {
        SkewPoly::monomial(ext, Monomial::var(i), ext.ring().one())
    }

    /// `c·x^α`.
    pub fn monomial(ext: &Arc<Extension>, alpha: Monomial, c: Elem) -> Self {
        let terms = if c == Elem::ZERO { Vec::new() } else { vec![(alpha, c)] };
        SkewPoly::from_sorted(ext, terms)
    }

    pub fn from_terms(ext: &Arc<Extension>, terms: impl IntoIterator<Item = (Monomial, Elem)>) -> Self {
        let ring = ext.ring();
        let mut acc = BTreeMap::new();
        for (m, c) in terms {
            accumulate(ring, &mut acc, m, c);
        }
        SkewPoly::from_sorted(ext, finish(acc))
    }

    pub fn ext(&self) -> &Arc<Extension> {
        &self.ext
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending deglex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Monomial, Elem)> + '_ {
        self.terms.iter().rev().copied()
    }

    /// Terms in ascending deglex order, i.e. the written expansion `X₀ ≺ X₁ ≺ ⋯`.
    pub fn support_ascending(&self) -> &[(Monomial, Elem)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Elem {
        self.terms
            .binary_search_by(|(t, _)| t.cmp(m))
            .map(|k| self.terms[k].1)
            .unwrap_or(Elem::ZERO)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = Elem> + '_ {
        self.terms.iter().map(|(_, c)| *c)
    }

    pub fn degree(&self) -> u32 {
        self.terms.last().map_or(0, |(m, _)| m.degree())
    }

    pub fn leading_data(&self) -> LeadingData {
        match self.terms.last() {
            None => LeadingData {
                lm: None,
                lc: Elem::ZERO,
                deg: 0,
                exp: vec![0; self.ext.nvars()],
            },
            Some((m, c)) => LeadingData {
                lm: Some(*m),
                lc: *c,
                deg: m.degree(),
                exp: m.exps(self.ext.nvars()),
            },
        }
    }

    /// Leading term `lc·lm` as a polynomial; zero for zero.
    pub fn leading_term(&self) -> SkewPoly {
        match self.terms.last() {
            None => SkewPoly::zero(&self.ext),
            Some((m, c)) => SkewPoly::monomial(&self.ext, *m, *c),
        }
    }

    fn check(&self, other: &SkewPoly) -> Result<(), ExtError> {
        if self.ext.same_as(&other.ext) {
            Ok(())
        } else {
            Err(ExtError::MixedExtensions)
        }
    }

    pub fn add(&self, other: &SkewPoly) -> Result<SkewPoly, ExtError> {
        self.check(other)?;
        let ring = self.ext.ring();
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match take {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = ring.add(a[i].1, b[j].1);
                    if c != Elem::ZERO {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(SkewPoly::from_sorted(&self.ext, out))
    }

    pub fn neg(&self) -> SkewPoly {
        let ring = self.ext.ring();
        let terms = self.terms.iter().map(|&(m, c)| (m, ring.neg(c))).collect();
        SkewPoly::from_sorted(&self.ext, terms)
    }

    pub fn sub(&self, other: &SkewPoly) -> Result<SkewPoly, ExtError> {
        self.add(&other.neg())
    }

    /// Left scaling `r·f`.
    pub fn scale(&self, r: Elem) -> SkewPoly {
        let ring = self.ext.ring();
        let terms = self
            .terms
            .iter()
            .map(|&(m, c)| (m, ring.mul(r, c)))
            .filter(|(_, c)| *c != Elem::ZERO)
            .collect();
        SkewPoly::from_sorted(&self.ext, terms)
    }

    /// Normal-form product.
    pub fn mul(&self, other: &SkewPoly) -> Result<SkewPoly, ExtError> {
        self.check(other)?;
        let terms = self.ext.nf_mul_terms(&self.terms, &other.terms)?;
        Ok(SkewPoly::from_sorted(&self.ext, terms))
    }

    /// `f·r` for a ring constant `r`.
    pub fn right_mul_const(&self, r: Elem) -> Result<SkewPoly, ExtError> {
        self.mul(&SkewPoly::constant(&self.ext, r))
    }

    pub fn pow(&self, k: u32) -> Result<SkewPoly, ExtError> {
        let mut acc = SkewPoly::one(&self.ext);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn format(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let ring = self.ext.ring();
        let vars = self.ext.var_names();
        self.terms()
            .map(|(m, c)| {
                if m.is_one() {
                    format!("({})", ring.format(c))
                } else {
                    format!("({})*{}", ring.format(c), m.format(vars))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl PartialEq for SkewPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ext.same_as(&other.ext) && self.terms == other.terms
    }
}

impl Eq for SkewPoly {}

impl fmt::Display for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl fmt::Debug for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkewPoly({})", self.format())
    }
}

/// Expression evaluation where identifiers are variables or ring generators.
impl Algebra for Arc<Extension> {
    type Value = SkewPoly;
    type Error = ExtError;

    fn from_int(&self, n: &BigUint) -> Result<SkewPoly, ExtError> {
        let r = Algebra::from_int(&**self.ring(), n)?;
        Ok(SkewPoly::constant(self, r))
    }

    fn ident(&self, name: &str) -> Result<SkewPoly, ExtError> {
        if let Some(i) = self.var_index(name) {
            return Ok(SkewPoly::var(self, i));
        }
        match self.ring().generator(name) {
            Some(g) => Ok(SkewPoly::constant(self, g)),
            None => Err(EvalError::UnknownName(name.to_string()).into()),
        }
    }

    fn add(&self, a: &SkewPoly, b: &SkewPoly) -> Result<SkewPoly, ExtError> {
        a.add(b)
    }

    fn neg(&self, a: &SkewPoly) -> Result<SkewPoly, ExtError> {
        Ok(a.neg())
    }

    fn mul(&self, a: &SkewPoly, b: &SkewPoly) -> Result<SkewPoly, ExtError> {
        a.mul(b)
    }

    fn matrix(&self, rows: &[Vec<Expr>]) -> Result<SkewPoly, ExtError> {
        let r = Algebra::matrix(&**self.ring(), rows)?;
        Ok(SkewPoly::constant(self, r))
    }
}

/// Parse a polynomial literal such as `(a^2*z)*x1^2*x2 + (1)`.
pub fn parse_poly(ext: &Arc<Extension>, text: &str) -> Result<SkewPoly, ExtError> {
    let e = expr::parse_expr(text).map_err(|e| ExtError::Ring(e.into()))?;
    eval_poly(ext, &e)
}

pub fn eval_poly(ext: &Arc<Extension>, e: &Expr) -> Result<SkewPoly, ExtError> {
    expr::eval(ext, e)
}

/// Random polynomial with up to `max_terms` terms of degree at most `max_deg`.
pub fn random_poly<R: Rng>(ext: &Arc<Extension>, rng: &mut R, max_deg: u32, max_terms: usize) -> SkewPoly {
    let mons = monomials_up_to(ext.nvars(), max_deg);
    let count = rng.gen_range(1..=max_terms.max(1));
    let ring = ext.ring();
    SkewPoly::from_terms(
        ext,
        (0..count).map(|_| (mons[rng.gen_range(0..mons.len())], ring.random_elem(rng))),
    )
}

/// The polynomial with support in `mons` whose coefficient vector has
/// mixed-radix code `code`, first monomial least significant.
pub fn poly_from_code(ext: &Arc<Extension>, mons: &[Monomial], mut code: u64) -> SkewPoly {
    let card = ext.ring().card() as u64;
    let mut terms = Vec::with_capacity(mons.len());
    for m in mons {
        let c = Elem((code % card) as u32);
        code /= card;
        if c != Elem::ZERO {
            terms.push((*m, c));
        }
    }
    SkewPoly::from_terms(ext, terms)
}

/// Number of polynomials with support in `mons`, if it fits in `u64`.
pub fn count_polys(ext: &Extension, mons: &[Monomial]) -> Option<u64> {
    (ext.ring().card() as u64).checked_pow(mons.len() as u32)
}

/// Every polynomial whose support lies in `mons`, in code order.
pub fn enumerate_polys<'a>(ext: &'a Arc<Extension>, mons: &'a [Monomial]) -> impl Iterator<Item = SkewPoly> + 'a {
    let total = count_polys(ext, mons).unwrap_or(u64::MAX);
    (0..total).map(move |code| poly_from_code(ext, mons, code))
}
