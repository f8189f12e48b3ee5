use serde::Serialize;

use super::{Elem, ElemSet, FiniteRing};

/// Why `N(R)` fails to be an ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NiWitness {
    /// `a`, `b` nilpotent with `a + b` not.
    Sum { a: Elem, b: Elem },
    /// `n` nilpotent with `r n` or `n r` not.
    Product { nil: Elem, by: Elem, left: bool },
}

/// Nilpotent structure of a finite ring.
#[derive(Clone, Debug)]
pub struct NilData {
    pub nilpotents: ElemSet,
    /// Least `t` with every product of `t` nilpotents zero; NI rings only.
    pub nilindex: Option<u32>,
    pub is_ni: bool,
    pub ni_witness: Option<NiWitness>,
    /// Prime radical; for finite rings this is the Jacobson radical.
    pub prime_radical: ElemSet,
    pub is_2primal: bool,
    pub units: ElemSet,
}

pub fn nil_data(ring: &FiniteRing) -> &NilData {
    ring.nil_data()
}

pub(crate) fn compute_nil_data(ring: &FiniteRing) -> NilData {
    let card = ring.card();
    let mut nilpotents = ElemSet::empty(card);
    for r in ring.elements() {
        let mut p = r;
        for _ in 0..card {
            if p == Elem::ZERO {
                nilpotents.insert(r);
                break;
            }
            p = ring.mul(p, r);
        }
    }

    let ni_witness = find_ni_witness(ring, &nilpotents);
    let is_ni = ni_witness.is_none();
    let nilindex = is_ni.then(|| nil_index(ring, &nilpotents));

    let mut units = ElemSet::empty(card);
    for u in ring.elements() {
        if ring.elements().any(|v| ring.mul(u, v) == ring.one()) {
            units.insert(u);
        }
    }

    let mut prime_radical = ElemSet::empty(card);
    for r in ring.elements() {
        if ring
            .elements()
            .all(|s| units.contains(ring.sub(ring.one(), ring.mul(s, r))))
        {
            prime_radical.insert(r);
        }
    }
    let is_2primal = prime_radical == nilpotents;

    NilData {
        nilpotents,
        nilindex,
        is_ni,
        ni_witness,
        prime_radical,
        is_2primal,
        units,
    }
}

fn find_ni_witness(ring: &FiniteRing, nil: &ElemSet) -> Option<NiWitness> {
    for a in nil.iter() {
        for b in nil.iter() {
            if !nil.contains(ring.add(a, b)) {
                return Some(NiWitness::Sum { a, b });
            }
        }
        for r in ring.elements() {
            if !nil.contains(ring.mul(r, a)) {
                return Some(NiWitness::Product {
                    nil: a,
                    by: r,
                    left: true,
                });
            }
            if !nil.contains(ring.mul(a, r)) {
                return Some(NiWitness::Product {
                    nil: a,
                    by: r,
                    left: false,
                });
            }
        }
    }
    None
}

/// Least `t` with `N^t = 0`, where `N^{k+1}` is the additive span of `N^k N`.
fn nil_index(ring: &FiniteRing, nil: &ElemSet) -> u32 {
    let mut power = nil.clone();
    let mut t = 1;
    while power.len() > 1 || power.first() != Some(Elem::ZERO) {
        let mut next = ElemSet::empty(ring.card());
        next.insert(Elem::ZERO);
        for a in power.iter() {
            for b in nil.iter() {
                next.insert(ring.mul(a, b));
            }
        }
        power = additive_closure(ring, next);
        t += 1;
    }
    t
}

/// Smallest additive subgroup containing `set`.
pub fn additive_closure(ring: &FiniteRing, mut set: ElemSet) -> ElemSet {
    set.insert(Elem::ZERO);
    let mut frontier: Vec<Elem> = set.to_vec();
    let gens = frontier.clone();
    while let Some(a) = frontier.pop() {
        for &g in &gens {
            let s = ring.add(a, g);
            if set.insert(s) {
                frontier.push(s);
            }
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use crate::finring::{build_ring, BuildOptions, RingSpec};

    #[test]
    fn f4z2_is_local_and_ni() {
        let r = build_ring(
            &RingSpec::quotient(RingSpec::gf(4), "z", vec![0, 0, 1]),
            &BuildOptions { cap: 256 },
        )
        .unwrap();
        let nd = r.nil_data();
        assert_eq!(nd.nilpotents.len(), 4);
        assert!(nd.is_ni && nd.is_2primal);
        assert_eq!(nd.nilindex, Some(2));
        assert_eq!(nd.units.len(), 12);
    }

    #[test]
    fn full_matrices_are_not_ni() {
        let r = build_ring(&RingSpec::matrices(RingSpec::Zmod(2), 2), &BuildOptions { cap: 256 })
            .unwrap();
        let nd = r.nil_data();
        assert!(!nd.is_ni);
        assert!(nd.ni_witness.is_some());
        assert_eq!(nd.nilpotents.len(), 4);
        assert_eq!(nd.prime_radical.len(), 1);
        assert_eq!(nd.units.len(), 6);
    }

    #[test]
    fn triangular_radical_is_strict_upper() {
        let r = build_ring(&RingSpec::triangular(RingSpec::Zmod(2), 3), &BuildOptions { cap: 256 })
            .unwrap();
        let nd = r.nil_data();
        assert!(nd.is_ni && nd.is_2primal);
        assert_eq!(nd.nilpotents.len(), 8);
        assert_eq!(nd.nilindex, Some(3));
    }
}
