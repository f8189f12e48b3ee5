//! Seeded harnesses for the principal-by-nilpotent annihilator results and
//! the Π-Armendariz property.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ann::{
    principal_nilpotent_generator, principal_right_ideal, weak_ann_set, weak_annihilator_ext, AnnMode,
    DEFAULT_ENUMERATION_CAP,
};
use super::cert::Certificate;
use super::nilpoly::{is_nilpotent_poly, NilMode};
use super::NilError;
use crate::finring::{additive_closure, Elem, ElemSet, FiniteRing};
use crate::spbwalg::{monomials_up_to, poly_from_code, random_poly, Extension, SkewPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremKind {
    /// `N_A(U)` for subsets `U ⊄ N(A)`.
    Subsets,
    /// `N_A(fA)` for principal right ideals `fA ⊄ N(A)`.
    PrincipalIdeals,
    /// `N_A(f)` for `f ∉ N(A)`.
    SingleElements,
}

#[derive(Clone, Debug, Serialize)]
pub struct RingSideCheck {
    pub singletons: usize,
    pub sampled_subsets: usize,
    pub principal_ideals: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialResult {
    pub trial: usize,
    pub target: Vec<String>,
    pub generator: Option<String>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub which: TheoremKind,
    pub trials: usize,
    pub seed: u64,
    pub degree_bound: u32,
    pub ring_side: RingSideCheck,
    pub results: Vec<TrialResult>,
    pub failures: usize,
    pub generators: Vec<String>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Small additive generating set of `R`: greedy in code order.
pub fn additive_generators(ring: &FiniteRing) -> Vec<Elem> {
    let mut span = additive_closure(ring, ElemSet::empty(ring.card()));
    let mut gens = Vec::new();
    for e in ring.elements() {
        if !span.contains(e) {
            gens.push(e);
            let mut s = span.clone();
            s.insert(e);
            span = additive_closure(ring, s);
        }
    }
    gens
}

fn ring_side_hypothesis(
    ring: &FiniteRing,
    which: TheoremKind,
    rng: &mut ChaCha8Rng,
) -> Result<RingSideCheck, NilError> {
    let nd = ring.nil_data();
    let fail = |what: String| Err(NilError::HypothesisFailedRingSide { witness: what });
    let non_nil: Vec<Elem> = ring.elements().filter(|e| !nd.nilpotents.contains(*e)).collect();
    let mut check = RingSideCheck {
        singletons: 0,
        sampled_subsets: 0,
        principal_ideals: 0,
    };
    match which {
        TheoremKind::Subsets | TheoremKind::SingleElements => {
            for &x in &non_nil {
                check.singletons += 1;
                let ann = weak_ann_set(ring, [x]);
                if principal_nilpotent_generator(ring, &ann).is_none() {
                    return fail(format!("N_R({}) is not cR for a nilpotent c", ring.format(x)));
                }
            }
            if which == TheoremKind::Subsets && !non_nil.is_empty() {
                for _ in 0..64 {
                    let size = rng.gen_range(2..=4usize);
                    let mut xs = vec![non_nil[rng.gen_range(0..non_nil.len())]];
                    xs.extend((1..size).map(|_| ring.random_elem(rng)));
                    check.sampled_subsets += 1;
                    let ann = weak_ann_set(ring, xs.iter().copied());
                    if principal_nilpotent_generator(ring, &ann).is_none() {
                        let names: Vec<String> = xs.iter().map(|&x| ring.format(x)).collect();
                        return fail(format!("N_R({{{}}}) is not cR for a nilpotent c", names.join(", ")));
                    }
                }
            }
        }
        TheoremKind::PrincipalIdeals => {
            for p in ring.elements() {
                let ideal = principal_right_ideal(ring, p);
                if ideal.is_subset(&nd.nilpotents) {
                    continue;
                }
                check.principal_ideals += 1;
                let ann = weak_ann_set(ring, ideal.iter());
                if principal_nilpotent_generator(ring, &ann).is_none() {
                    return fail(format!("N_R({}R) is not cR for a nilpotent c", ring.format(p)));
                }
            }
        }
    }
    Ok(check)
}

fn random_non_nil(
    ext: &Arc<Extension>,
    rng: &mut ChaCha8Rng,
    degree: u32,
    cert: &Certificate,
) -> Result<SkewPoly, NilError> {
    for _ in 0..1000 {
        let f = random_poly(ext, rng, degree, 3);
        if !is_nilpotent_poly(&f, NilMode::Both, Some(cert))?.nilpotent {
            return Ok(f);
        }
    }
    Err(NilError::OutOfScope("could not sample a non-nilpotent polynomial".into()))
}

/// The polynomials whose weak annihilator equals that of the target:
/// the target itself for sets and elements, and `f·(r x^β)` over additive
/// generators `r` and `|β| ≤ D` for `fA`.
pub fn target_generators(
    ext: &Arc<Extension>,
    which: TheoremKind,
    target: &[SkewPoly],
    degree_bound: u32,
) -> Result<Vec<SkewPoly>, NilError> {
    match which {
        TheoremKind::PrincipalIdeals => {
            let f = &target[0];
            let mut out = Vec::new();
            for r in additive_generators(ext.ring()) {
                for m in monomials_up_to(ext.nvars(), degree_bound) {
                    let p = f.mul(&SkewPoly::monomial(ext, m, r))?;
                    if !p.is_zero() && !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
            Ok(out)
        }
        _ => Ok(target.to_vec()),
    }
}

/// One theorem instance: the weak annihilator of `target` (both paths) must
/// equal `cA` truncated, for a nilpotent `c` found on the ring side.
pub fn verify_target(
    ext: &Arc<Extension>,
    which: TheoremKind,
    target: &[SkewPoly],
    degree_bound: u32,
    cert: &Certificate,
) -> Result<(Option<Elem>, Option<String>), NilError> {
    let mut outside = false;
    for t in target {
        outside |= !is_nilpotent_poly(t, NilMode::Both, Some(cert))?.nilpotent;
    }
    if !outside {
        return Err(NilError::OutOfScope("the target lies inside N(A)".into()));
    }
    let ring = ext.ring();
    let gens = target_generators(ext, which, target, degree_bound)?;
    let ann = weak_annihilator_ext(ext, &gens, degree_bound, AnnMode::Both, Some(cert), DEFAULT_ENUMERATION_CAP)?;
    if ann.agree != Some(true) {
        let d = ann.first_divergence.as_ref().map(|d| d.candidate.clone()).unwrap_or_default();
        return Ok((None, Some(format!("fastpath and brute force disagree at {d}"))));
    }
    let ideal = ann.coefficient_ideal.as_ref().expect("fastpath ran");
    let Some(c) = principal_nilpotent_generator(ring, ideal) else {
        return Ok((None, Some("N_R(C_U) has no nilpotent principal generator".into())));
    };
    // cA truncated, built directly as the products c·h
    let mons = monomials_up_to(ext.nvars(), degree_bound);
    let members = ann.brute_members.as_ref().expect("brute ran");
    let total = ann.candidates;
    let mut lifted = vec![false; total as usize];
    for code in 0..total {
        let h = poly_from_code(ext, &mons, code);
        let ch = h.scale(c);
        lifted[code_of(ext, &mons, &ch) as usize] = true;
    }
    let mut in_brute = vec![false; total as usize];
    for &m in members {
        in_brute[m as usize] = true;
    }
    if lifted != in_brute {
        let k = (0..total as usize).find(|&k| lifted[k] != in_brute[k]).unwrap();
        let g = poly_from_code(ext, &mons, k as u64);
        return Ok((
            Some(c),
            Some(format!("cA and N_A(U) differ at {} at degree ≤ {degree_bound}", g.format())),
        ));
    }
    Ok((Some(c), None))
}

fn code_of(ext: &Extension, mons: &[crate::spbwalg::Monomial], p: &SkewPoly) -> u64 {
    let card = ext.ring().card() as u64;
    mons.iter().rev().fold(0u64, |acc, m| acc * card + p.coefficient(m).0 as u64)
}

pub fn verify_theorem(
    ext: &Arc<Extension>,
    which: TheoremKind,
    trials: usize,
    seed: u64,
    degree_bound: u32,
    cert: &Certificate,
) -> Result<TheoremReport, NilError> {
    cert.require_strict_ni("the annihilator theorems")?;
    let ring = ext.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ring_side = ring_side_hypothesis(ring, which, &mut rng)?;
    let mut results = Vec::with_capacity(trials);
    let mut generators: Vec<String> = Vec::new();
    for trial in 0..trials {
        let target = match which {
            TheoremKind::Subsets => {
                let size = rng.gen_range(1..=3usize);
                let mut u = vec![random_non_nil(ext, &mut rng, degree_bound, cert)?];
                u.extend((1..size).map(|_| random_poly(ext, &mut rng, degree_bound, 3)));
                u
            }
            _ => vec![random_non_nil(ext, &mut rng, degree_bound, cert)?],
        };
        let (c, failure) = verify_target(ext, which, &target, degree_bound, cert)?;
        let generator = c.map(|c| ring.format(c));
        if let Some(g) = &generator {
            if !generators.contains(g) {
                generators.push(g.clone());
            }
        }
        results.push(TrialResult {
            trial,
            target: target.iter().map(SkewPoly::format).collect(),
            generator,
            passed: failure.is_none(),
            failure,
        });
    }
    let failures = results.iter().filter(|r| !r.passed).count();
    Ok(TheoremReport {
        which,
        trials,
        seed,
        degree_bound,
        ring_side,
        results,
        failures,
        generators,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ArmendarizCounterexample {
    pub f: String,
    pub g: String,
    pub product_nilpotent: bool,
    pub coefficient_products_nilpotent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ArmendarizReport {
    pub pairs: usize,
    pub seed: u64,
    pub counterexamples: Vec<ArmendarizCounterexample>,
}

impl ArmendarizReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// `fg ∈ N(A) ⟺ a_i b_j ∈ N(R)` on seeded pairs of degree at most 2.
pub fn pi_armendariz_check(
    ext: &Arc<Extension>,
    trials: usize,
    seed: u64,
    cert: &Certificate,
) -> Result<ArmendarizReport, NilError> {
    cert.require_weak_ni("the Π-Armendariz check")?;
    let ring = ext.ring();
    let nil = &ring.nil_data().nilpotents;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counterexamples = Vec::new();
    for _ in 0..trials {
        let f = random_poly(ext, &mut rng, 2, 4);
        let g = random_poly(ext, &mut rng, 2, 4);
        let fg = f.mul(&g)?;
        let verdict = is_nilpotent_poly(&fg, NilMode::Both, Some(cert))?;
        let products = f
            .coefficients()
            .all(|a| g.coefficients().all(|b| nil.contains(ring.mul(a, b))));
        if verdict.nilpotent != products || verdict.agree == Some(false) {
            counterexamples.push(ArmendarizCounterexample {
                f: f.format(),
                g: g.format(),
                product_nilpotent: verdict.nilpotent,
                coefficient_products_nilpotent: products,
            });
        }
    }
    Ok(ArmendarizReport {
        pairs: trials,
        seed,
        counterexamples,
    })
}
