use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::AssocError;
use crate::finring::{additive_closure, Elem, ElemSet, FiniteRing};
use crate::nilweak::weak_ann_set;

/// Default cardinality limit for lattice enumeration.
pub const DEFAULT_IDEAL_CAP: u64 = 64;

/// A right ideal as an element set, with a generating set of least size
/// (the first generators that reach it in breadth-first order).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RightIdeal {
    pub elements: ElemSet,
    pub generators: Vec<Elem>,
}

impl RightIdeal {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Always false: a right ideal holds 0.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.elements.contains(e)
    }
}

/// Right ideal generated by `set`: sums of products `s r`.
pub fn right_ideal_closure(ring: &FiniteRing, set: &ElemSet) -> ElemSet {
    let mut prods = ElemSet::from_elems(ring.card(), [Elem::ZERO]);
    for s in set.iter() {
        for r in ring.elements() {
            prods.insert(ring.mul(s, r));
        }
    }
    additive_closure(ring, prods)
}

pub fn is_right_ideal(ring: &FiniteRing, set: &ElemSet) -> bool {
    set.contains(Elem::ZERO)
        && set.iter().all(|a| {
            set.iter().all(|b| set.contains(ring.add(a, b))) && ring.elements().all(|r| set.contains(ring.mul(a, r)))
        })
}

/// Greedy generators of a right ideal in code order.
pub fn right_ideal_generators(ring: &FiniteRing, ideal: &ElemSet) -> Vec<Elem> {
    let mut span = ElemSet::from_elems(ring.card(), [Elem::ZERO]);
    let mut gens = Vec::new();
    for e in ideal.iter() {
        if !span.contains(e) {
            gens.push(e);
            let mut s = span.clone();
            s.insert(e);
            span = right_ideal_closure(ring, &s);
        }
    }
    gens
}

/// Every right ideal of `ring`, sorted by size and then by element set.
pub fn enumerate_right_ideals(ring: &FiniteRing, cap: u64) -> Result<Vec<RightIdeal>, AssocError> {
    if ring.card() as u64 > cap {
        return Err(AssocError::CardinalityOverCap {
            cardinality: ring.card() as u64,
            cap,
        });
    }
    let zero = RightIdeal {
        elements: ElemSet::from_elems(ring.card(), [Elem::ZERO]),
        generators: Vec::new(),
    };
    let mut seen: BTreeSet<ElemSet> = BTreeSet::new();
    seen.insert(zero.elements.clone());
    let mut found = vec![zero.clone()];
    let mut queue = VecDeque::from([zero]);
    while let Some(ideal) = queue.pop_front() {
        for e in ring.elements() {
            if ideal.contains(e) {
                continue;
            }
            let mut s = ideal.elements.clone();
            s.insert(e);
            let next = right_ideal_closure(ring, &s);
            if seen.insert(next.clone()) {
                let mut generators = ideal.generators.clone();
                generators.push(e);
                let j = RightIdeal {
                    elements: next,
                    generators,
                };
                found.push(j.clone());
                queue.push_back(j);
            }
        }
    }
    found.sort_by(|a, b| (a.len(), &a.elements).cmp(&(b.len(), &b.elements)));
    Ok(found)
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiPrimeWitness {
    /// Generators of the sub-right-ideal `I′`.
    pub sub_ideal: Vec<Elem>,
    pub sub_annihilator: ElemSet,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiPrimeCert {
    pub ideal: RightIdeal,
    pub is_quasi_prime: bool,
    pub inside_nilradical: bool,
    pub annihilator: ElemSet,
    pub witness: Option<QuasiPrimeWitness>,
}

pub fn quasi_prime_check(ring: &FiniteRing, lattice: &[RightIdeal], ideal: &RightIdeal) -> QuasiPrimeCert {
    let nil = &ring.nil_data().nilpotents;
    let annihilator = weak_ann_set(ring, ideal.elements.iter());
    let inside_nilradical = ideal.elements.is_subset(nil);
    let mut witness = None;
    if !inside_nilradical {
        witness = lattice
            .iter()
            .filter(|j| j.elements.is_subset(&ideal.elements) && !j.elements.is_subset(nil))
            .find_map(|j| {
                let sub_annihilator = weak_ann_set(ring, j.elements.iter());
                (sub_annihilator != annihilator).then(|| QuasiPrimeWitness {
                    sub_ideal: j.generators.clone(),
                    sub_annihilator,
                })
            });
    }
    QuasiPrimeCert {
        ideal: ideal.clone(),
        is_quasi_prime: !inside_nilradical && witness.is_none(),
        inside_nilradical,
        annihilator,
        witness,
    }
}

impl QuasiPrimeCert {
    /// Re-check the certificate against the definition without the lattice.
    pub fn reverify(&self, ring: &FiniteRing) -> bool {
        let nil = &ring.nil_data().nilpotents;
        let i = &self.ideal.elements;
        if !is_right_ideal(ring, i) || weak_ann_set(ring, i.iter()) != self.annihilator {
            return false;
        }
        if i.is_subset(nil) != self.inside_nilradical {
            return false;
        }
        if let Some(w) = &self.witness {
            let sub = right_ideal_closure(ring, &ElemSet::from_elems(ring.card(), w.sub_ideal.iter().copied()));
            return !self.is_quasi_prime
                && sub.is_subset(i)
                && !sub.is_subset(nil)
                && weak_ann_set(ring, sub.iter()) == w.sub_annihilator
                && w.sub_annihilator != self.annihilator;
        }
        if self.inside_nilradical {
            return !self.is_quasi_prime;
        }
        // a sub-right-ideal J ⊄ N(R) holds some non-nilpotent x, and then
        // N_R(I) ⊆ N_R(J) ⊆ N_R(xR); so the principal ones decide
        for x in i.iter().filter(|x| !nil.contains(*x)) {
            let sub = right_ideal_closure(ring, &ElemSet::from_elems(ring.card(), [x]));
            if weak_ann_set(ring, sub.iter()) != self.annihilator {
                return false;
            }
        }
        self.is_quasi_prime
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NassPrime {
    pub prime: ElemSet,
    pub generators: Vec<Elem>,
    /// Indices into the lattice of the quasi-prime ideals realizing it.
    pub from_ideals: Vec<usize>,
}

/// `NAss(R) = {N_R(I) : I quasi-prime}`, deduplicated, in lattice order.
pub fn nass_ring(ring: &FiniteRing, lattice: &[RightIdeal]) -> Result<Vec<NassPrime>, AssocError> {
    if !ring.nil_data().is_ni {
        return Err(AssocError::NotNI);
    }
    let certs: Vec<QuasiPrimeCert> =
        crate::par::map_slice(lattice, |i| quasi_prime_check(ring, lattice, i));
    let mut out: Vec<NassPrime> = Vec::new();
    for (k, cert) in certs.into_iter().enumerate() {
        if !cert.is_quasi_prime {
            continue;
        }
        match out.iter_mut().find(|p| p.prime == cert.annihilator) {
            Some(p) => p.from_ideals.push(k),
            None => out.push(NassPrime {
                generators: right_ideal_generators(ring, &cert.annihilator),
                prime: cert.annihilator,
                from_ideals: vec![k],
            }),
        }
    }
    Ok(out)
}
