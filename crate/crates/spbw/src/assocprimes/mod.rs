//! Right-ideal lattices of finite rings, quasi-prime ideals and `NAss(R)`,
//! nilpotent degree and the good-polynomial descent, and the bounded check
//! of `NAss(A) = {PA}`.

mod ideals;
mod nassext;
mod ndeg;

use thiserror::Error;

use crate::nilweak::NilError;
use crate::spbwalg::ExtError;

pub use ideals::{
    enumerate_right_ideals, is_right_ideal, nass_ring, quasi_prime_check, right_ideal_closure, right_ideal_generators,
    NassPrime, QuasiPrimeCert, QuasiPrimeWitness, RightIdeal, DEFAULT_IDEAL_CAP,
};
pub use nassext::{verify_nass_extension, BackwardCheck, ForwardCheck, NassExtReport};
pub use ndeg::{is_nilpotent_good, make_nilpotent_good, ndeg, DescentStep, GoodResult, NdegData};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssocError {
    #[error("ring has {cardinality} elements, above the ideal-lattice cap {cap} (use --force)")]
    CardinalityOverCap { cardinality: u64, cap: u64 },
    #[error("N(R) is not an ideal, so NAss(R) is undefined")]
    NotNI,
    #[error("`{0}` already lies in N(R)A")]
    PreconditionNilpotent(String),
    #[error("descent stuck at step {step} on `{poly}`: {detail}")]
    DescentStuck { poly: String, step: usize, detail: String },
    #[error("{count} candidates exceed the enumeration cap {cap}")]
    EnumerationOverCap { count: String, cap: u64 },
    #[error(transparent)]
    Nil(#[from] NilError),
    #[error(transparent)]
    Ext(#[from] ExtError),
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::finring::{build_ring, BuildOptions, Elem, ElemSet, FiniteRing, RingSpec};
    use crate::nilweak::{certify, coefficient_criterion, weak_ann_set};
    use crate::spbwalg::examples::{f4z2_extension, f4z2_ring};
    use crate::spbwalg::{parse_poly, random_poly, Extension};

    fn ring(spec: RingSpec) -> Arc<FiniteRing> {
        build_ring(&spec, &BuildOptions::default()).unwrap()
    }

    fn mat_kt2() -> Arc<FiniteRing> {
        ring(RingSpec::trivial(RingSpec::quotient(RingSpec::Zmod(2), "t", vec![0, 0, 1])))
    }

    #[test]
    fn small_lattices() {
        let gf4 = ring(RingSpec::gf(4));
        let l = enumerate_right_ideals(&gf4, DEFAULT_IDEAL_CAP).unwrap();
        assert_eq!(l.iter().map(RightIdeal::len).collect::<Vec<_>>(), vec![1, 4]);
        let z4 = ring(RingSpec::Zmod(4));
        let l = enumerate_right_ideals(&z4, DEFAULT_IDEAL_CAP).unwrap();
        assert_eq!(l.iter().map(RightIdeal::len).collect::<Vec<_>>(), vec![1, 2, 4]);
        assert_eq!(l[1].elements, ElemSet::from_elems(4, [Elem(0), Elem(2)]));
        assert_eq!(l[1].generators, vec![Elem(2)]);
    }

    #[test]
    fn lattice_matches_brute_force_subsets() {
        // every subset of Z/6 that is a right ideal, by exhaustion over 2^6 subsets
        let z6 = ring(RingSpec::Zmod(6));
        let mut brute: Vec<ElemSet> = (0u32..64)
            .map(|m| ElemSet::from_elems(6, (0..6).filter(|b| m >> b & 1 == 1).map(Elem)))
            .filter(|s| is_right_ideal(&z6, s))
            .collect();
        brute.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        let lattice: Vec<ElemSet> = enumerate_right_ideals(&z6, 64).unwrap().into_iter().map(|i| i.elements).collect();
        assert_eq!(lattice, brute);
    }

    #[test]
    fn cap_is_enforced() {
        let r = ring(RingSpec::Zmod(128));
        assert!(matches!(
            enumerate_right_ideals(&r, DEFAULT_IDEAL_CAP),
            Err(AssocError::CardinalityOverCap { .. })
        ));
    }

    #[test]
    fn quasi_primes_of_zmod4_and_gf4() {
        let z4 = ring(RingSpec::Zmod(4));
        let l = enumerate_right_ideals(&z4, 64).unwrap();
        let certs: Vec<_> = l.iter().map(|i| quasi_prime_check(&z4, &l, i)).collect();
        assert_eq!(certs.iter().map(|c| c.is_quasi_prime).collect::<Vec<_>>(), vec![false, false, true]);
        assert_eq!(certs[2].annihilator, ElemSet::from_elems(4, [Elem(0), Elem(2)]));
        assert!(certs.iter().all(|c| c.reverify(&z4)));
        let nass = nass_ring(&z4, &l).unwrap();
        assert_eq!(nass.len(), 1);
        assert_eq!(nass[0].prime, ElemSet::from_elems(4, [Elem(0), Elem(2)]));

        let gf4 = ring(RingSpec::gf(4));
        let l = enumerate_right_ideals(&gf4, 64).unwrap();
        let nass = nass_ring(&gf4, &l).unwrap();
        assert_eq!(nass.len(), 1);
        assert_eq!(nass[0].prime, ElemSet::from_elems(4, [Elem(0)]));
    }

    #[test]
    fn reduced_non_local_ring_has_several_primes() {
        let z6 = ring(RingSpec::Zmod(6));
        let l = enumerate_right_ideals(&z6, 64).unwrap();
        let nass = nass_ring(&z6, &l).unwrap();
        let sets: Vec<ElemSet> = nass.iter().map(|p| p.prime.clone()).collect();
        assert!(sets.contains(&ElemSet::from_elems(6, [Elem(0), Elem(3)])));
        assert!(sets.contains(&ElemSet::from_elems(6, [Elem(0), Elem(2), Elem(4)])));
    }

    #[test]
    fn truncated_matrix_example() {
        let r = mat_kt2();
        assert_eq!(r.card(), 16);
        let l = enumerate_right_ideals(&r, 64).unwrap();
        let certs: Vec<_> = l.iter().map(|i| quasi_prime_check(&r, &l, i)).collect();
        assert!(certs.iter().all(|c| c.reverify(&r)));
        let nil = r.nil_data().nilpotents.clone();
        // the nilradical itself is a right ideal but not quasi-prime
        let n_idx = l.iter().position(|i| i.elements == nil).unwrap();
        assert!(!certs[n_idx].is_quasi_prime);
        let nass = nass_ring(&r, &l).unwrap();
        assert_eq!(nass.len(), 1);
        assert_eq!(nass[0].prime, nil);
    }

    #[test]
    fn nass_rejects_non_ni() {
        let m2 = ring(RingSpec::matrices(RingSpec::Zmod(2), 2));
        let l = enumerate_right_ideals(&m2, 64).unwrap();
        assert_eq!(nass_ring(&m2, &l).unwrap_err(), AssocError::NotNI);
    }

    #[test]
    fn nass_primes_are_two_sided_and_proper() {
        for r in [mat_kt2(), f4z2_ring().unwrap(), ring(RingSpec::Zmod(12))] {
            let l = enumerate_right_ideals(&r, 64).unwrap();
            for p in nass_ring(&r, &l).unwrap() {
                let units = &r.nil_data().units;
                assert!(p.prime.intersection(units).is_empty());
                for a in p.prime.iter() {
                    for x in r.elements() {
                        assert!(p.prime.contains(r.mul(x, a)) && p.prime.contains(r.mul(a, x)));
                    }
                }
            }
        }
    }

    #[test]
    fn ndeg_examples() {
        let ext = f4z2_extension().unwrap();
        let f = parse_poly(&ext, "z + x1").unwrap();
        let d = ndeg(&f);
        assert_eq!(d.ndeg, 1);
        assert_eq!(d.monomial.as_deref(), Some("x1"));
        assert!(d.is_good);
        let g = parse_poly(&ext, "a + z*x1").unwrap();
        assert_eq!(ndeg(&g).ndeg, 0);
        assert!(is_nilpotent_good(&g));
        let h = parse_poly(&ext, "z*x2 + a*z").unwrap();
        assert_eq!(ndeg(&h).ndeg, -1);
    }

    #[test]
    fn descent_on_zmod6() {
        let ext = Extension::polynomial(&ring(RingSpec::Zmod(6)), &["x"]).unwrap();
        let cert = certify(&ext).unwrap();
        let f = parse_poly(&ext, "3 + 2*x").unwrap();
        assert!(!is_nilpotent_good(&f));
        let out = make_nilpotent_good(&f, &cert).unwrap();
        assert_eq!(out.r, Elem(3));
        assert_eq!(out.steps, 1);
        assert!(is_nilpotent_good(&out.poly));
        assert_eq!(out.final_ndeg, 0);

        let already = parse_poly(&ext, "1 + x").unwrap();
        let out = make_nilpotent_good(&already, &cert).unwrap();
        assert_eq!((out.r, out.steps), (Elem(1), 0));

        let nil = parse_poly(&ext, "0").unwrap();
        assert!(matches!(make_nilpotent_good(&nil, &cert), Err(AssocError::PreconditionNilpotent(_))));
    }

    #[test]
    fn descent_on_f4z2_trials() {
        let ext = f4z2_extension().unwrap();
        let cert = certify(&ext).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut done = 0;
        while done < 30 {
            let f = random_poly(&ext, &mut rng, 2, 4);
            assert_eq!(ndeg(&f).ndeg == -1, coefficient_criterion(&f));
            if ndeg(&f).ndeg < 0 {
                continue;
            }
            let out = make_nilpotent_good(&f, &cert).unwrap();
            assert!(is_nilpotent_good(&out.poly));
            assert!(out.final_ndeg >= 0 && out.final_ndeg <= out.initial_ndeg);
            done += 1;
        }
    }

    #[test]
    fn random_zmod12_descents_decrease() {
        let ext = Extension::polynomial(&ring(RingSpec::Zmod(12)), &["x", "y"]).unwrap();
        let cert = certify(&ext).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let f = random_poly(&ext, &mut rng, 2, 5);
            if ndeg(&f).ndeg < 0 {
                continue;
            }
            let out = make_nilpotent_good(&f, &cert).unwrap();
            assert!(is_nilpotent_good(&out.poly));
            assert!(out.steps <= f.len());
            let mut last = out.initial_ndeg;
            for s in &out.trace {
                assert!(s.position <= last);
                last = s.position;
            }
            assert!(out.final_ndeg < out.initial_ndeg || out.steps == 0);
            let fr = f.right_mul_const(out.r).unwrap();
            assert_eq!(fr, out.poly);
        }
    }

    #[test]
    fn nass_extension_bounded() {
        let ext = f4z2_extension().unwrap();
        let cert = certify(&ext).unwrap();
        let report = verify_nass_extension(&ext, 1, 5, 3, &cert, 64, 1 << 20).unwrap();
        assert!(report.passed, "{report:?}");
        assert_eq!(report.forward.len(), 1);
        assert_eq!(report.forward[0].candidates, 4096);
        assert_eq!(report.forward[0].members, 64);

        let r = mat_kt2();
        let ore = Extension::polynomial(&r, &["x"]).unwrap();
        let cert = certify(&ore).unwrap();
        let report = verify_nass_extension(&ore, 2, 5, 3, &cert, 64, 1 << 20).unwrap();
        assert!(report.passed, "{report:?}");
        let nil = &r.nil_data().nilpotents;
        assert_eq!(report.forward[0].members as usize, nil.len().pow(3));
        assert_eq!(weak_ann_set(&r, [r.one()]), *nil);
    }
}
