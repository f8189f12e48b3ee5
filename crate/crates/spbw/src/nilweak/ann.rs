use std::sync::Arc;

use serde::Serialize;

use super::cert::Certificate;
use super::nilpoly::{power_oracle, oracle_budget, OracleOutcome};
use super::NilError;
use crate::finring::symbolic::{SymRing, SymValue};
use crate::finring::{additive_closure, Elem, ElemSet, FiniteRing};
use crate::par;
use crate::spbwalg::{count_polys, monomials_up_to, poly_from_code, Extension, Monomial, SkewPoly};

/// Enumeration budget for extension-side brute force.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;

/// `{a : x a ∈ N(R)}`.
pub fn weak_ann_single(ring: &FiniteRing, x: Elem) -> ElemSet {
    let nil = &ring.nil_data().nilpotents;
    ElemSet::from_elems(ring.card(), ring.elements().filter(|&a| nil.contains(ring.mul(x, a))))
}

/// `N_R(X) = ⋂_{x ∈ X} N_R({x})`.
pub fn weak_ann_set(ring: &FiniteRing, xs: impl IntoIterator<Item = Elem>) -> ElemSet {
    let mut acc = ElemSet::full(ring.card());
    for x in xs {
        acc.intersect_with(&weak_ann_single(ring, x));
    }
    acc
}

/// Right annihilator `{r : X r = 0}`.
pub fn right_ann(ring: &FiniteRing, xs: &ElemSet) -> ElemSet {
    ElemSet::from_elems(
        ring.card(),
        ring.elements().filter(|&r| xs.iter().all(|x| ring.mul(x, r) == Elem::ZERO)),
    )
}

/// Left annihilator `{r : r X = 0}`.
pub fn left_ann(ring: &FiniteRing, xs: &ElemSet) -> ElemSet {
    ElemSet::from_elems(
        ring.card(),
        ring.elements().filter(|&r| xs.iter().all(|x| ring.mul(r, x) == Elem::ZERO)),
    )
}

/// `cR`.
pub fn right_multiples(ring: &FiniteRing, c: Elem) -> ElemSet {
    ElemSet::from_elems(ring.card(), ring.elements().map(|r| ring.mul(c, r)))
}

/// `RcR`, the two-sided ideal generated by `c`.
pub fn two_sided_ideal(ring: &FiniteRing, c: Elem) -> ElemSet {
    let mut s = ElemSet::empty(ring.card());
    for a in ring.elements() {
        for b in ring.elements() {
            s.insert(ring.mul(ring.mul(a, c), b));
        }
    }
    additive_closure(ring, s)
}

/// Right ideal `pR + ⋯` generated by `p`, i.e. `pR` (rings have 1).
pub fn principal_right_ideal(ring: &FiniteRing, p: Elem) -> ElemSet {
    right_multiples(ring, p)
}

/// Least nilpotent `c` (by code) with `cR = target`.
pub fn principal_nilpotent_generator(ring: &FiniteRing, target: &ElemSet) -> Option<Elem> {
    let nil = &ring.nil_data().nilpotents;
    target
        .iter()
        .filter(|c| nil.contains(*c))
        .find(|&c| right_multiples(ring, c) == *target)
}

#[derive(Clone, Debug, Serialize)]
pub struct RingAnn {
    pub annihilator: ElemSet,
    pub generator: Option<Elem>,
    /// `cR ≠ RcR` for the generator found.
    pub two_sided_differs: bool,
}

pub fn weak_annihilator_ring(ring: &FiniteRing, xs: &[Elem]) -> Result<RingAnn, NilError> {
    if xs.is_empty() {
        return Err(NilError::EmptyTarget);
    }
    let annihilator = weak_ann_set(ring, xs.iter().copied());
    let generator = principal_nilpotent_generator(ring, &annihilator);
    let two_sided_differs = generator.is_some_and(|c| right_multiples(ring, c) != two_sided_ideal(ring, c));
    Ok(RingAnn {
        annihilator,
        generator,
        two_sided_differs,
    })
}

/// `N_R(X)` over a symbolic ring, as a membership predicate.
#[derive(Clone, Debug)]
pub struct SymWeakAnn {
    ring: Arc<SymRing>,
    xs: Vec<SymValue>,
}

impl SymWeakAnn {
    pub fn new(ring: &Arc<SymRing>, xs: Vec<SymValue>) -> Result<Self, NilError> {
        if xs.is_empty() {
            return Err(NilError::EmptyTarget);
        }
        Ok(SymWeakAnn {
            ring: Arc::clone(ring),
            xs,
        })
    }

    pub fn contains(&self, a: &SymValue) -> Result<bool, NilError> {
        for x in &self.xs {
            if !self.ring.is_nilpotent(&self.ring.mul(x, a))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnMethod {
    TheoremFastpath,
    BruteForce,
    BothAgree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnMode {
    Fast,
    Brute,
    Both,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtDivergence {
    pub candidate: String,
    pub fastpath: bool,
    pub brute: bool,
}

/// Degree-truncated weak annihilator of a set of polynomials.
#[derive(Clone, Debug, Serialize)]
pub struct ExtAnn {
    pub degree_bound: u32,
    pub coefficient_set: ElemSet,
    /// `N_R(C_U)`; the truncation of `N_R(C_U)A` is every polynomial of
    /// degree at most the bound with coefficients here.
    pub coefficient_ideal: Option<ElemSet>,
    pub candidates: u64,
    /// Candidate codes (see `poly_from_code`) in the brute-force annihilator.
    #[serde(skip)]
    pub brute_members: Option<Vec<u64>>,
    pub brute_count: Option<usize>,
    /// Oracle calls that ended on the term limit rather than a proof.
    pub inconclusive: usize,
    pub method: AnnMethod,
    pub agree: Option<bool>,
    pub first_divergence: Option<ExtDivergence>,
}

pub(crate) fn coefficient_set(ring: &FiniteRing, us: &[SkewPoly]) -> ElemSet {
    ElemSet::from_elems(ring.card(), us.iter().flat_map(|u| u.coefficients().collect::<Vec<_>>()))
}

/// Oracle test `u g ∈ N(A)` for all `u`; also reports inconclusive calls.
fn annihilates(us: &[SkewPoly], g: &SkewPoly) -> Result<(bool, bool), NilError> {
    let mut inconclusive = false;
    for u in us {
        let p = u.mul(g)?;
        match power_oracle(&p, oracle_budget(&p))? {
            OracleOutcome::Nilpotent { .. } => {}
            OracleOutcome::NoZeroPower { budget, reached } => {
                inconclusive |= reached < budget;
                return Ok((false, inconclusive));
            }
            OracleOutcome::UnitChain { .. } => return Ok((false, inconclusive)),
        }
    }
    Ok((true, inconclusive))
}

pub fn weak_annihilator_ext(
    ext: &Arc<Extension>,
    us: &[SkewPoly],
    degree_bound: u32,
    mode: AnnMode,
    cert: Option<&Certificate>,
    enumeration_cap: u64,
) -> Result<ExtAnn, NilError> {
    if us.is_empty() {
        return Err(NilError::EmptyTarget);
    }
    if us.iter().any(|u| !u.ext().same_as(ext)) {
        return Err(crate::spbwalg::ExtError::MixedExtensions.into());
    }
    let ring = ext.ring();
    let cset = coefficient_set(ring, us);
    let mons: Vec<Monomial> = monomials_up_to(ext.nvars(), degree_bound);
    let total = count_polys(ext, &mons);

    let ideal = match mode {
        AnnMode::Brute => None,
        _ => {
            cert.ok_or_else(|| NilError::HypothesisNotCertified("fastpath needs a certificate".into()))?
                .require_strict_ni("the annihilator fastpath")?;
            Some(weak_ann_set(ring, cset.iter()))
        }
    };

    let mut brute_members = None;
    let mut inconclusive = 0;
    if mode != AnnMode::Fast {
        let total = match total {
            Some(t) if t <= enumeration_cap => t,
            _ => {
                return Err(NilError::EnumerationOverCap {
                    count: total.map_or_else(|| "overflow".into(), |t| t.to_string()),
                    cap: enumeration_cap,
                })
            }
        };
        let flags = par::map_range(total as usize, |code| {
            let g = poly_from_code(ext, &mons, code as u64);
            annihilates(us, &g)
        });
        let mut members = Vec::new();
        for (code, f) in flags.into_iter().enumerate() {
            let (member, inc) = f?;
            inconclusive += inc as usize;
            if member {
                members.push(code as u64);
            }
        }
        brute_members = Some(members);
    }

    let (agree, first_divergence) = match (&ideal, &brute_members) {
        (Some(ideal), Some(members)) => {
            let mut k = 0;
            let mut div = None;
            for code in 0..total.unwrap_or(0) {
                let g = poly_from_code(ext, &mons, code);
                let fast = g.coefficients().all(|c| ideal.contains(c));
                let brute = members.get(k) == Some(&code);
                if brute {
                    k += 1;
                }
                if fast != brute {
                    div = Some(ExtDivergence {
                        candidate: g.format(),
                        fastpath: fast,
                        brute,
                    });
                    break;
                }
            }
            (Some(div.is_none()), div)
        }
        _ => (None, None),
    };
    let method = match mode {
        AnnMode::Fast => AnnMethod::TheoremFastpath,
        AnnMode::Brute => AnnMethod::BruteForce,
        AnnMode::Both => AnnMethod::BothAgree,
    };
    Ok(ExtAnn {
        degree_bound,
        coefficient_set: cset,
        coefficient_ideal: ideal,
        candidates: total.unwrap_or(u64::MAX),
        brute_count: brute_members.as_ref().map(Vec::len),
        brute_members,
        inconclusive,
        method,
        agree,
        first_divergence,
    })
}
