use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ideals::{enumerate_right_ideals, nass_ring, right_ideal_closure, NassPrime, RightIdeal};
use super::ndeg::{make_nilpotent_good, ndeg};
use super::AssocError;
use crate::finring::{ElemSet, FiniteRing};
use crate::nilweak::{
    is_nilpotent_poly, oracle_budget, power_oracle, weak_ann_set, Certificate, NilError, NilMode,
};
use crate::par;
use crate::spbwalg::{count_polys, monomials_up_to, poly_from_code, random_poly, Extension, SkewPoly};

#[derive(Clone, Debug, Serialize)]
pub struct ForwardCheck {
    pub prime: Vec<String>,
    pub ideal_generators: Vec<String>,
    pub candidates: u64,
    pub members: usize,
    pub passed: bool,
    pub first_divergence: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BackwardCheck {
    pub trial: usize,
    pub good_poly: String,
    pub ndeg_coefficient: String,
    /// Index into the ring-side NAss list reproduced by `N_R(m_k R)`.
    pub matches: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NassExtReport {
    pub degree_bound: u32,
    pub seed: u64,
    pub nass_ring: Vec<Vec<String>>,
    pub forward: Vec<ForwardCheck>,
    pub backward: Vec<BackwardCheck>,
    pub passed: bool,
}

fn names(ring: &FiniteRing, set: impl IntoIterator<Item = crate::finring::Elem>) -> Vec<String> {
    set.into_iter().map(|e| ring.format(e)).collect()
}

/// `g ∈ N_A(IA)` at degree `≤ D`, decided by the power oracle on `(i x^β) g`.
fn in_annihilator_of_ia(probes: &[SkewPoly], g: &SkewPoly) -> Result<bool, NilError> {
    for u in probes {
        let p = u.mul(g)?;
        if !power_oracle(&p, oracle_budget(&p))?.is_nilpotent() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn forward(
    ext: &Arc<Extension>,
    prime: &NassPrime,
    ideal: &RightIdeal,
    degree_bound: u32,
    enumeration_cap: u64,
) -> Result<ForwardCheck, AssocError> {
    let ring = ext.ring();
    let mons = monomials_up_to(ext.nvars(), degree_bound);
    let total = match count_polys(ext, &mons) {
        Some(t) if t <= enumeration_cap => t,
        t => {
            return Err(AssocError::EnumerationOverCap {
                count: t.map_or_else(|| "overflow".into(), |t| t.to_string()),
                cap: enumeration_cap,
            })
        }
    };
    let probes: Vec<SkewPoly> = ideal
        .elements
        .iter()
        .filter(|e| *e != crate::finring::Elem::ZERO)
        .flat_map(|i| mons.iter().map(move |m| SkewPoly::monomial(ext, *m, i)))
        .collect();
    let verdicts = par::map_range(total as usize, |code| {
        let g = poly_from_code(ext, &mons, code as u64);
        let lhs = in_annihilator_of_ia(&probes, &g)?;
        let rhs = g.coefficients().all(|c| prime.prime.contains(c));
        Ok::<_, NilError>((lhs, rhs))
    });
    let mut members = 0;
    let mut first_divergence = None;
    for (code, v) in verdicts.into_iter().enumerate() {
        let (lhs, rhs) = v?;
        members += lhs as usize;
        if lhs != rhs && first_divergence.is_none() {
            first_divergence = Some(poly_from_code(ext, &mons, code as u64).format());
        }
    }
    Ok(ForwardCheck {
        prime: names(ring, prime.generators.iter().copied()),
        ideal_generators: names(ring, ideal.generators.iter().copied()),
        candidates: total,
        members,
        passed: first_divergence.is_none(),
        first_divergence,
    })
}

/// Bounded check of `NAss(A) = {PA : P ∈ NAss(R)}`: for each `P = N_R(I)`,
/// `N_A(IA)` and `PA` agree at degree `≤ D`; and for seeded nilpotent good
/// `m`, `N_R(m_k R)` lies in `NAss(R)`.
pub fn verify_nass_extension(
    ext: &Arc<Extension>,
    degree_bound: u32,
    trials: usize,
    seed: u64,
    cert: &Certificate,
    ideal_cap: u64,
    enumeration_cap: u64,
) -> Result<NassExtReport, AssocError> {
    cert.require_strict_ni("the NAss correspondence")?;
    let ring = ext.ring();
    let lattice = enumerate_right_ideals(ring, ideal_cap)?;
    let nass = nass_ring(ring, &lattice)?;
    let mut fwd = Vec::new();
    for p in &nass {
        fwd.push(forward(ext, p, &lattice[p.from_ideals[0]], degree_bound, enumeration_cap)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut back = Vec::new();
    let mut trial = 0;
    let mut attempts = 0;
    while trial < trials && attempts < 100 * trials.max(1) {
        attempts += 1;
        let f = random_poly(ext, &mut rng, degree_bound.max(1), 3);
        if is_nilpotent_poly(&f, NilMode::Criterion, Some(cert))?.nilpotent {
            continue;
        }
        let good = make_nilpotent_good(&f, cert)?;
        let data = ndeg(&good.poly);
        let mk = good.poly.support_ascending()[data.ndeg as usize].1;
        let u = weak_ann_set(ring, right_ideal_closure(ring, &ElemSet::from_elems(ring.card(), [mk])).iter());
        back.push(BackwardCheck {
            trial,
            good_poly: good.fr,
            ndeg_coefficient: ring.format(mk),
            matches: nass.iter().position(|p| p.prime == u),
        });
        trial += 1;
    }
    let passed = fwd.iter().all(|c| c.passed) && back.iter().all(|b| b.matches.is_some()) && back.len() == trials;
    Ok(NassExtReport {
        degree_bound,
        seed,
        nass_ring: nass.iter().map(|p| names(ring, p.generators.iter().copied())).collect(),
        forward: fwd,
        backward: back,
        passed,
    })
}
