//! Nilpotent elements of an extension, weak annihilators on both sides, and
//! seeded verification of the annihilator correspondence.

mod ann;
mod cert;
mod nilpoly;
mod theorems;

use thiserror::Error;

use crate::finring::RingError;
use crate::ringmaps::MapError;
use crate::spbwalg::ExtError;

pub use ann::{
    left_ann, principal_nilpotent_generator, principal_right_ideal, right_ann, right_multiples, two_sided_ideal,
    weak_ann_set, weak_ann_single, weak_annihilator_ext, weak_annihilator_ring, AnnMethod, AnnMode, ExtAnn,
    ExtDivergence, RingAnn, SymWeakAnn, DEFAULT_ENUMERATION_CAP,
};
pub use cert::{certify, Certificate};
pub use nilpoly::{
    coefficient_criterion, is_nilpotent_poly, oracle_budget, power_oracle, NilMode, NilVerdict, OracleOutcome,
    ORACLE_TERM_LIMIT,
};
pub use theorems::{
    additive_generators, pi_armendariz_check, target_generators, verify_target, verify_theorem,
    ArmendarizCounterexample, ArmendarizReport, RingSideCheck, TheoremKind, TheoremReport, TrialResult,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NilError {
    #[error("hypothesis not certified: {0}")]
    HypothesisNotCertified(String),
    #[error("criterion says `{poly}` is nilpotent but no power up to {budget} vanished")]
    OracleBudgetExceeded { poly: String, budget: u32 },
    #[error("the target set is empty")]
    EmptyTarget,
    #[error("{count} candidates exceed the enumeration cap {cap}")]
    EnumerationOverCap { count: String, cap: u64 },
    #[error("ring-side hypothesis fails: {witness}")]
    HypothesisFailedRingSide { witness: String },
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error(transparent)]
    Ext(#[from] ExtError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use proptest::prelude::*;

    use super::*;
    use crate::finring::symbolic::{SymRing, SymSpec};
    use crate::finring::{build_ring, BuildOptions, Elem, ElemSet, FiniteRing, RingSpec};
    use crate::spbwalg::examples::{f4z2_extension, f4z2_ring};
    use crate::spbwalg::{monomials_up_to, parse_poly, Extension, Monomial};

    fn zmod(n: u64) -> Arc<FiniteRing> {
        build_ring(&RingSpec::Zmod(n), &BuildOptions::default()).unwrap()
    }

    #[test]
    fn f4z2_singletons_are_principal_by_z() {
        let r = f4z2_ring().unwrap();
        let z = r.generator("z").unwrap();
        let nil = r.nil_data().nilpotents.clone();
        for x in r.elements().filter(|x| !nil.contains(*x)) {
            let ann = weak_annihilator_ring(&r, &[x]).unwrap();
            assert_eq!(ann.annihilator, right_multiples(&r, z));
            assert_eq!(ann.annihilator, nil);
            assert!(ann.generator.is_some());
            assert!(!ann.two_sided_differs);
        }
        let one = weak_annihilator_ring(&r, &[r.one()]).unwrap();
        assert_eq!(one.annihilator, nil);
        assert!(matches!(weak_annihilator_ring(&r, &[]), Err(NilError::EmptyTarget)));
    }

    #[test]
    fn zmod4_generators() {
        let r = zmod(4);
        let two = Elem(2);
        let ann = weak_annihilator_ring(&r, &[Elem(1)]).unwrap();
        assert_eq!(ann.annihilator, ElemSet::from_elems(4, [Elem(0), two]));
        assert_eq!(ann.generator, Some(two));
        let all = weak_annihilator_ring(&r, &[two]).unwrap();
        assert_eq!(all.annihilator, ElemSet::full(4));
        assert_eq!(all.generator, None);
        assert_eq!(principal_nilpotent_generator(&r, &ElemSet::from_elems(4, [Elem(0)])), Some(Elem(0)));
    }

    #[test]
    fn symbolic_triangular_weak_annihilator() {
        let r = Arc::new(
            SymRing::new(SymSpec::Triangular {
                base: Box::new(SymSpec::Int),
                size: 2,
            })
            .unwrap(),
        );
        let x = r.parse_elem("[2, 0; 0, 2]").unwrap();
        let ann = SymWeakAnn::new(&r, vec![x]).unwrap();
        assert!(ann.contains(&r.parse_elem("[0, 5; 0, 0]").unwrap()).unwrap());
        assert!(!ann.contains(&r.one()).unwrap());
        assert!(SymWeakAnn::new(&r, vec![]).is_err());
    }

    #[test]
    fn ordinary_annihilators_sit_inside_weak_ones() {
        let r = f4z2_ring().unwrap();
        for x in r.elements() {
            let xs = ElemSet::from_elems(r.card(), [x]);
            let weak = weak_ann_single(&r, x);
            assert!(right_ann(&r, &xs).is_subset(&weak));
            assert!(left_ann(&r, &xs).is_subset(&weak));
        }
    }

    fn ext_and_cert() -> (Arc<Extension>, Certificate) {
        let ext = f4z2_extension().unwrap();
        let cert = certify(&ext).unwrap();
        (ext, cert)
    }

    #[test]
    fn f4z2_extension_is_certified() {
        let (_, cert) = ext_and_cert();
        assert!(cert.strict_ni());
        assert!(cert.weak_ni());
    }

    #[test]
    fn nilpotency_of_sample_polynomials() {
        let (ext, cert) = ext_and_cert();
        let f = parse_poly(&ext, "z*x1 + a*z*x2").unwrap();
        let v = is_nilpotent_poly(&f, NilMode::Both, Some(&cert)).unwrap();
        assert!(v.nilpotent);
        assert_eq!(v.agree, Some(true));
        assert!(matches!(v.oracle, Some(OracleOutcome::Nilpotent { index: 2 })));

        let g = parse_poly(&ext, "1 + x1").unwrap();
        let v = is_nilpotent_poly(&g, NilMode::Both, Some(&cert)).unwrap();
        assert!(!v.nilpotent);
        assert_eq!(v.agree, Some(true));

        let h = parse_poly(&ext, "z*x1").unwrap();
        assert!(is_nilpotent_poly(&h, NilMode::Oracle, None).unwrap().nilpotent);
        assert!(is_nilpotent_poly(&h, NilMode::Criterion, None).is_err());
    }

    #[test]
    fn oracle_finds_index_over_zmod8() {
        let ext = Extension::polynomial(&zmod(8), &["x"]).unwrap();
        let f = parse_poly(&ext, "2*x + 2").unwrap();
        assert_eq!(
            power_oracle(&f, oracle_budget(&f)).unwrap(),
            OracleOutcome::Nilpotent { index: 3 }
        );
    }

    #[test]
    fn coefficient_set_of_target() {
        let (ext, cert) = ext_and_cert();
        let r = ext.ring();
        let u = parse_poly(&ext, "z*x1 + a").unwrap();
        let ann = weak_annihilator_ext(&ext, &[u], 0, AnnMode::Fast, Some(&cert), DEFAULT_ENUMERATION_CAP).unwrap();
        let z = r.generator("z").unwrap();
        let a = r.generator("a").unwrap();
        assert_eq!(ann.coefficient_set, ElemSet::from_elems(r.card(), [z, a]));
        assert_eq!(ann.coefficient_ideal.unwrap(), r.nil_data().nilpotents);
    }

    #[test]
    fn fastpath_matches_brute_force_for_x1() {
        let (ext, cert) = ext_and_cert();
        let u = parse_poly(&ext, "x1").unwrap();
        let ann = weak_annihilator_ext(&ext, &[u], 1, AnnMode::Both, Some(&cert), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(ann.agree, Some(true));
        assert_eq!(ann.candidates, 16u64.pow(3));
        // coefficients in zR = {0, z, az, a²z}
        assert_eq!(ann.brute_count, Some(64));
        assert_eq!(ann.inconclusive, 0);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let (ext, _) = ext_and_cert();
        let u = parse_poly(&ext, "x1").unwrap();
        let err = weak_annihilator_ext(&ext, &[u], 2, AnnMode::Brute, None, 1000).unwrap_err();
        assert!(matches!(err, NilError::EnumerationOverCap { .. }));
    }

    #[test]
    fn principal_theorem_on_f4z2() {
        let (ext, cert) = ext_and_cert();
        let report = verify_theorem(&ext, TheoremKind::SingleElements, 2, 7, 1, &cert).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.generators.len(), 1);
    }

    #[test]
    fn out_of_scope_target_is_rejected() {
        let (ext, cert) = ext_and_cert();
        let u = parse_poly(&ext, "z*x1").unwrap();
        let err = verify_target(&ext, TheoremKind::SingleElements, &[u], 1, &cert).unwrap_err();
        assert!(matches!(err, NilError::OutOfScope(_)));
    }

    #[test]
    fn armendariz_holds_on_f4z2() {
        let (ext, cert) = ext_and_cert();
        let report = pi_armendariz_check(&ext, 20, 3, &cert).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn additive_generators_span() {
        let r = f4z2_ring().unwrap();
        let gens = additive_generators(&r);
        assert_eq!(gens.len(), 4);
        let span = crate::finring::additive_closure(&r, ElemSet::from_elems(r.card(), gens));
        assert_eq!(span, ElemSet::full(r.card()));
    }

    #[test]
    fn monomial_count_matches_brute_candidates() {
        assert_eq!(monomials_up_to(2, 1), vec![Monomial::ONE, Monomial::var(0), Monomial::var(1)]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // X ⊆ Y ⟹ N_R(Y) ⊆ N_R(X), and N_R(X ∪ Y) = N_R(X) ∩ N_R(Y).
        #[test]
        fn galois_laws(xs in prop::collection::vec(0u32..16, 1..4), ys in prop::collection::vec(0u32..16, 1..4)) {
            let r = f4z2_ring().unwrap();
            let x: Vec<Elem> = xs.into_iter().map(Elem).collect();
            let y: Vec<Elem> = ys.into_iter().map(Elem).collect();
            let xy: Vec<Elem> = x.iter().chain(&y).copied().collect();
            let nx = weak_ann_set(&r, x.iter().copied());
            let ny = weak_ann_set(&r, y.iter().copied());
            let nxy = weak_ann_set(&r, xy.iter().copied());
            prop_assert!(nxy.is_subset(&nx));
            prop_assert_eq!(nxy, nx.intersection(&ny));
        }
    }
}
