use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{delta_power, multi_indices, sigma_power, Derivation, MapError, RingMap};
use crate::finring::{Elem, ElemSet, FiniteRing};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheckMode {
    Exhaustive,
    /// "No counterexample in `count` seeded samples."
    Sampled { count: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompatLaw {
    /// `ab ∈ Z ⟺ aσ(b) ∈ Z` with `Z = 0`.
    Sigma,
    /// `ab ∈ Z ⟹ aδ(b) ∈ Z` with `Z = 0`.
    Delta,
    WeakSigma,
    WeakDelta,
    IdealSigma,
    IdealDelta,
}

impl CompatLaw {
    fn is_delta(self) -> bool {
        matches!(self, CompatLaw::Delta | CompatLaw::WeakDelta | CompatLaw::IdealDelta)
    }
}

/// A pair violating one law for one map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatWitness {
    pub law: CompatLaw,
    pub map_index: usize,
    pub map_name: String,
    pub a: String,
    pub b: String,
    /// `ab`
    pub product: String,
    /// `aσ(b)` or `aδ(b)`
    pub twisted: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codes: Option<(Elem, Elem)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatReport {
    pub sigma_compatible: bool,
    pub delta_compatible: bool,
    pub weak_sigma: bool,
    pub weak_delta: bool,
    pub witnesses: Vec<CompatWitness>,
    pub mode: CheckMode,
}

impl CompatReport {
    pub fn strict(&self) -> bool {
        self.sigma_compatible && self.delta_compatible
    }

    pub fn weak(&self) -> bool {
        self.weak_sigma && self.weak_delta
    }

    pub fn witness(&self, law: CompatLaw) -> Option<&CompatWitness> {
        self.witnesses.iter().find(|w| w.law == law)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealCompatReport {
    pub sigma_compatible: bool,
    pub delta_compatible: bool,
    pub witnesses: Vec<CompatWitness>,
    pub mode: CheckMode,
}

/// Single-map check of a law against membership in `class`.
fn violates(r: &FiniteRing, class: &ElemSet, law: CompatLaw, table: &[Elem], a: Elem, b: Elem) -> bool {
    let ab = class.contains(r.mul(a, b));
    let twisted = class.contains(r.mul(a, table[b.idx()]));
    if law.is_delta() {
        ab && !twisted
    } else {
        ab != twisted
    }
}

fn sample_pairs(r: &FiniteRing, count: u64, seed: u64) -> Vec<(Elem, Elem)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (Elem(rng.gen_range(0..r.card())), Elem(rng.gen_range(0..r.card()))))
        .collect()
}

fn first_violation(
    r: &FiniteRing,
    class: &ElemSet,
    law: CompatLaw,
    table: &[Elem],
    mode: CheckMode,
    samples: &[(Elem, Elem)],
) -> Option<(Elem, Elem)> {
    match mode {
        CheckMode::Exhaustive => par::find_first(r.card() as usize, |a| {
            let a = Elem(a as u32);
            r.elements().find(|&b| violates(r, class, law, table, a, b))
        })
        .map(|(a, b)| (Elem(a as u32), b)),
        CheckMode::Sampled { .. } => par::find_first(samples.len(), |i| {
            let (a, b) = samples[i];
            violates(r, class, law, table, a, b).then_some(())
        })
        .map(|(i, ())| samples[i]),
    }
}

fn witness(
    r: &FiniteRing,
    law: CompatLaw,
    map_index: usize,
    map_name: &str,
    table: &[Elem],
    (a, b): (Elem, Elem),
) -> CompatWitness {
    CompatWitness {
        law,
        map_index,
        map_name: map_name.to_string(),
        a: r.format(a),
        b: r.format(b),
        product: r.format(r.mul(a, b)),
        twisted: r.format(r.mul(a, table[b.idx()])),
        codes: Some((a, b)),
    }
}

fn same_ring(ring: &FiniteRing, sigmas: &[RingMap], deltas: &[Derivation]) -> Result<(), MapError> {
    let ok = sigmas.iter().all(|m| m.ring().id() == ring.id())
        && deltas.iter().all(|d| d.ring().id() == ring.id());
    if ok {
        Ok(())
    } else {
        Err(MapError::MixedRings)
    }
}

/// Check every law for every generating map; `ℕⁿ` exponents are covered by
/// [`derived_law_suite`].
fn run_laws(
    ring: &FiniteRing,
    class: &ElemSet,
    laws: (CompatLaw, CompatLaw),
    sigmas: &[RingMap],
    deltas: &[Derivation],
    mode: CheckMode,
    out: &mut Vec<CompatWitness>,
) -> (bool, bool) {
    let samples = match mode {
        CheckMode::Exhaustive => Vec::new(),
        CheckMode::Sampled { count, seed } => sample_pairs(ring, count, seed),
    };
    let mut ok = (true, true);
    for (i, m) in sigmas.iter().enumerate() {
        if let Some(p) = first_violation(ring, class, laws.0, m.table(), mode, &samples) {
            ok.0 = false;
            out.push(witness(ring, laws.0, i, m.name(), m.table(), p));
        }
    }
    for (i, d) in deltas.iter().enumerate() {
        if let Some(p) = first_violation(ring, class, laws.1, d.table(), mode, &samples) {
            ok.1 = false;
            out.push(witness(ring, laws.1, i, d.name(), d.table(), p));
        }
    }
    ok
}

/// Strict and weak (Σ,Δ)-compatibility of `ring`.
pub fn check_compatibility(
    ring: &FiniteRing,
    sigmas: &[RingMap],
    deltas: &[Derivation],
    mode: CheckMode,
) -> Result<CompatReport, MapError> {
    same_ring(ring, sigmas, deltas)?;
    let zero = ElemSet::from_elems(ring.card(), [Elem::ZERO]);
    let nil = &ring.nil_data().nilpotents;
    let mut witnesses = Vec::new();
    let strict = run_laws(
        ring,
        &zero,
        (CompatLaw::Sigma, CompatLaw::Delta),
        sigmas,
        deltas,
        mode,
        &mut witnesses,
    );
    let weak = run_laws(
        ring,
        nil,
        (CompatLaw::WeakSigma, CompatLaw::WeakDelta),
        sigmas,
        deltas,
        mode,
        &mut witnesses,
    );
    Ok(CompatReport {
        sigma_compatible: strict.0,
        delta_compatible: strict.1,
        weak_sigma: weak.0,
        weak_delta: weak.1,
        witnesses,
        mode,
    })
}

/// Verify that `ideal` is a two-sided ideal.
pub fn ensure_two_sided(ring: &FiniteRing, ideal: &ElemSet) -> Result<(), MapError> {
    if !ideal.contains(Elem::ZERO) {
        return Err(MapError::NotAnIdeal("0 is missing".into()));
    }
    for a in ideal.iter() {
        for b in ideal.iter() {
            if !ideal.contains(ring.add(a, b)) {
                return Err(MapError::NotAnIdeal(format!(
                    "{} + {} leaves the set",
                    ring.format(a),
                    ring.format(b)
                )));
            }
        }
        for r in ring.elements() {
            if !ideal.contains(ring.mul(r, a)) || !ideal.contains(ring.mul(a, r)) {
                return Err(MapError::NotAnIdeal(format!(
                    "multiples of {} by {} leave the set",
                    ring.format(a),
                    ring.format(r)
                )));
            }
        }
    }
    Ok(())
}

/// Σ- and Δ-compatibility of a two-sided ideal, exhaustively.
pub fn check_compatible_ideal(
    ring: &FiniteRing,
    ideal: &ElemSet,
    sigmas: &[RingMap],
    deltas: &[Derivation],
) -> Result<IdealCompatReport, MapError> {
    same_ring(ring, sigmas, deltas)?;
    ensure_two_sided(ring, ideal)?;
    let mut witnesses = Vec::new();
    let (s, d) = run_laws(
        ring,
        ideal,
        (CompatLaw::IdealSigma, CompatLaw::IdealDelta),
        sigmas,
        deltas,
        CheckMode::Exhaustive,
        &mut witnesses,
    );
    Ok(IdealCompatReport {
        sigma_compatible: s,
        delta_compatible: d,
        witnesses,
        mode: CheckMode::Exhaustive,
    })
}

/// Membership class used by the derived-law suite.
#[derive(Clone, Debug)]
pub enum LawClass {
    Zero,
    Nil,
    Ideal(ElemSet),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawVerdict {
    pub law: &'static str,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<LawWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawWitness {
    pub alpha: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<u32>>,
    pub a: String,
    pub b: String,
}

const LAWS: [&str; 6] = [
    "ab in Z implies a s^alpha(b) in Z",
    "ab in Z implies s^alpha(a) b in Z",
    "s^alpha(a) b in Z implies ab in Z",
    "a s^alpha(b) in Z implies ab in Z",
    "ab in Z implies s^alpha(a) d^beta(b) in Z",
    "ab in Z implies d^beta(a) s^alpha(b) in Z",
];

/// Re-derive the consequence laws of compatibility for every composite
/// `σ^α`, `δ^β` with `|α|, |β| ≤ max_order`. When the ring is compatible for
/// `class`, any failure is an error; otherwise the failures are reported.
pub fn derived_law_suite(
    ring: &FiniteRing,
    sigmas: &[RingMap],
    deltas: &[Derivation],
    class: &LawClass,
    max_order: u32,
) -> Result<Vec<LawVerdict>, MapError> {
    same_ring(ring, sigmas, deltas)?;
    let n = sigmas.len();
    if !deltas.is_empty() && deltas.len() != n {
        return Err(MapError::LawViolation(
            "one derivation per endomorphism is required".into(),
        ));
    }
    if n == 0 {
        return Ok(LAWS
            .iter()
            .map(|&law| LawVerdict {
                law,
                holds: true,
                witness: None,
            })
            .collect());
    }
    let zero = ElemSet::from_elems(ring.card(), [Elem::ZERO]);
    let (set, compatible) = match class {
        LawClass::Zero => {
            let rep = check_compatibility(ring, sigmas, deltas, CheckMode::Exhaustive)?;
            (zero, rep.strict())
        }
        LawClass::Nil => {
            let rep = check_compatibility(ring, sigmas, deltas, CheckMode::Exhaustive)?;
            (ring.nil_data().nilpotents.clone(), rep.weak())
        }
        LawClass::Ideal(i) => {
            let rep = check_compatible_ideal(ring, i, sigmas, deltas)?;
            (i.clone(), rep.sigma_compatible && rep.delta_compatible)
        }
    };

    let alphas = multi_indices(n, max_order);
    let s_tables: Vec<Vec<Elem>> = alphas.iter().map(|a| sigma_power(sigmas, a)).collect();
    let d_tables: Vec<Vec<Elem>> = if deltas.is_empty() {
        alphas
            .iter()
            .map(|b| {
                if b.iter().all(|&k| k == 0) {
                    ring.elements().collect()
                } else {
                    vec![Elem::ZERO; ring.card() as usize]
                }
            })
            .collect()
    } else {
        alphas.iter().map(|b| delta_power(deltas, b)).collect()
    };

    let r = ring;
    let z = |e: Elem| set.contains(e);
    let mut verdicts = Vec::new();
    for (li, &law) in LAWS.iter().enumerate() {
        let beta_range = if li >= 4 { alphas.len() } else { 1 };
        let combos = alphas.len() * beta_range;
        let hit = par::find_first(combos, |k| {
            let (ai, bi) = (k / beta_range, k % beta_range);
            let s = &s_tables[ai];
            let d = &d_tables[bi];
            for a in r.elements() {
                for b in r.elements() {
                    let ab = z(r.mul(a, b));
                    let bad = match li {
                        0 => ab && !z(r.mul(a, s[b.idx()])),
                        1 => ab && !z(r.mul(s[a.idx()], b)),
                        2 => z(r.mul(s[a.idx()], b)) && !ab,
                        3 => z(r.mul(a, s[b.idx()])) && !ab,
                        4 => ab && !z(r.mul(s[a.idx()], d[b.idx()])),
                        _ => ab && !z(r.mul(d[a.idx()], s[b.idx()])),
                    };
                    if bad {
                        return Some((a, b));
                    }
                }
            }
            None
        });
        let witness = hit.map(|(k, (a, b))| LawWitness {
            alpha: alphas[k / beta_range].clone(),
            beta: (li >= 4).then(|| alphas[k % beta_range].clone()),
            a: r.format(a),
            b: r.format(b),
        });
        if compatible {
            if let Some(w) = &witness {
                return Err(MapError::LawViolation(format!(
                    "{law} at alpha = {:?}, beta = {:?}, a = {}, b = {}",
                    w.alpha, w.beta, w.a, w.b
                )));
            }
        }
        verdicts.push(LawVerdict {
            law,
            holds: witness.is_none(),
            witness,
        });
    }
    Ok(verdicts)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::finring::{build_ring, BuildOptions, RingSpec};
    use crate::ringmaps::build_map;

    fn s2z4() -> (Arc<FiniteRing>, Vec<RingMap>) {
        let r = build_ring(&RingSpec::trivial(RingSpec::Zmod(4)), &BuildOptions { cap: 256 })
            .unwrap();
        let e = r.generator("e").unwrap();
        let maps = vec![
            build_map(&r, "s1", &[("e".into(), e)]).unwrap(),
            build_map(&r, "s2", &[("e".into(), r.neg(e))]).unwrap(),
            build_map(&r, "s3", &[("e".into(), Elem::ZERO)]).unwrap(),
        ];
        (r, maps)
    }

    #[test]
    fn s2z4_is_weak_but_not_strict() {
        let (r, maps) = s2z4();
        let rep = check_compatibility(&r, &maps, &[], CheckMode::Exhaustive).unwrap();
        assert!(!rep.sigma_compatible);
        assert!(rep.weak_sigma && rep.weak_delta && rep.delta_compatible);
        let w = rep.witness(CompatLaw::Sigma).unwrap();
        assert_eq!(w.map_index, 2);
        assert_eq!((w.a.as_str(), w.b.as_str()), ("[1, 0; 0, 1]", "[0, 1; 0, 0]"));
        assert_eq!(w.twisted, "[0, 0; 0, 0]");
        assert_ne!(w.product, "[0, 0; 0, 0]");
    }

    #[test]
    fn identity_and_nilpotent_pair_violates_sigma3() {
        let (r, maps) = s2z4();
        let c = r.parse_elem("[1, 1; 0, 1]").unwrap();
        let d = r.parse_elem("[0, 1; 0, 0]").unwrap();
        assert_eq!(r.mul(c, maps[2].apply(d)), Elem::ZERO);
        assert_ne!(r.mul(c, d), Elem::ZERO);
    }

    #[test]
    fn nil_ideal_is_sigma3_compatible() {
        let (r, maps) = s2z4();
        let nil = r.nil_data().nilpotents.clone();
        let rep = check_compatible_ideal(&r, &nil, &maps[2..], &[]).unwrap();
        assert!(rep.sigma_compatible && rep.delta_compatible);
    }

    #[test]
    fn non_ideal_is_rejected() {
        let (r, maps) = s2z4();
        let set = ElemSet::from_elems(r.card(), [Elem::ZERO, r.one()]);
        assert!(matches!(
            check_compatible_ideal(&r, &set, &maps, &[]),
            Err(MapError::NotAnIdeal(_))
        ));
    }

    #[test]
    fn law_suites_on_s2z4() {
        let (r, maps) = s2z4();
        let weak = derived_law_suite(&r, &maps, &[], &LawClass::Nil, 2).unwrap();
        assert!(weak.iter().all(|v| v.holds));
        let strict = derived_law_suite(&r, &maps, &[], &LawClass::Zero, 2).unwrap();
        assert!(strict.iter().any(|v| !v.holds));
    }

    #[test]
    fn sampled_mode_is_deterministic() {
        let (r, maps) = s2z4();
        let mode = CheckMode::Sampled { count: 500, seed: 3 };
        let a = check_compatibility(&r, &maps, &[], mode).unwrap();
        let b = check_compatibility(&r, &maps, &[], mode).unwrap();
        assert_eq!(a, b);
        assert!(!a.sigma_compatible);
    }
}
