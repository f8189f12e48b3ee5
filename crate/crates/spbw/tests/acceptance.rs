//! Acceptance suite. Each criterion prints one PASS/FAIL line with its wall
//! time against the limit; the process exits nonzero if any criterion fails.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spbw::assocprimes::{
    enumerate_right_ideals, is_nilpotent_good, make_nilpotent_good, nass_ring, ndeg, quasi_prime_check,
    right_ideal_closure, verify_nass_extension, RightIdeal, DEFAULT_IDEAL_CAP,
};
use spbw::finring::{Elem, ElemSet, FiniteRing};
use spbw::nilweak::{
    certify, is_nilpotent_poly, pi_armendariz_check, verify_theorem, weak_annihilator_ext, weak_annihilator_ring,
    AnnMode, NilMode, OracleOutcome, TheoremKind, DEFAULT_ENUMERATION_CAP,
};
use spbw::ringmaps::{check_compatibility, CheckMode, CompatLaw};
use spbw::shell::presets::{self, CATALOG};
use spbw::shell::{elaborate, ElabOptions, Presentation, RingValue};
use spbw::spbwalg::{check_pbw_confluence, Overlap, monomials_up_to, pow_alpha_times_r, random_poly, Extension, SkewPoly};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn load(name: &str) -> Presentation {
    let src = presets::source(name).unwrap_or_else(|| panic!("missing preset {name}"));
    elaborate(src, &ElabOptions::default()).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn finite(p: &Presentation) -> Arc<FiniteRing> {
    match p.active_ring() {
        Some((_, RingValue::Finite(r))) => r,
        _ => panic!("no finite ring"),
    }
}

fn ext(name: &str) -> Arc<Extension> {
    load(name).active_extension().expect("extension").clone()
}

fn brute_nilpotent(r: &FiniteRing, x: Elem) -> bool {
    let mut p = x;
    for _ in 0..=r.card() {
        if p == Elem::ZERO {
            return true;
        }
        p = r.mul(p, x);
    }
    false
}

/// `{a : xa nilpotent for all x ∈ X}` straight from the definition.
fn brute_weak_ann(r: &FiniteRing, xs: &[Elem]) -> ElemSet {
    ElemSet::from_elems(
        r.card(),
        r.elements().filter(|&a| xs.iter().all(|&x| brute_nilpotent(r, r.mul(x, a)))),
    )
}

fn random_subset(r: &FiniteRing, rng: &mut ChaCha8Rng) -> Vec<Elem> {
    let n = rng.gen_range(1..=3);
    (0..n).map(|_| r.random_elem(rng)).collect()
}

/// Half the samples have every coefficient in `N(R)`.
fn sample_poly(e: &Arc<Extension>, rng: &mut ChaCha8Rng, deg: u32, terms: usize) -> SkewPoly {
    let f = random_poly(e, rng, deg, terms);
    if rng.gen_bool(0.5) {
        return f;
    }
    let r = e.ring();
    let nil: Vec<Elem> = r.nil_data().nilpotents.to_vec();
    SkewPoly::from_terms(e, f.terms().map(|(m, _)| (m, nil[rng.gen_range(0..nil.len())])).collect::<Vec<_>>())
}

fn c1() -> Outcome {
    let r = finite(&load("f4z2"));
    let z = r.generator("z").unwrap();
    let zr = ElemSet::from_elems(r.card(), r.elements().map(|a| r.mul(z, a)));
    let mut cases = 0;
    for x in r.elements().filter(|&x| !brute_nilpotent(&r, x)) {
        let ann = weak_annihilator_ring(&r, &[x]).map_err(|e| e.to_string())?;
        ensure(ann.annihilator == zr && ann.annihilator == brute_weak_ann(&r, &[x]), || {
            format!("N_R({}) is not zR", r.format(x))
        })?;
        ensure(ann.generator == Some(z), || format!("generator of N_R({}) is not z", r.format(x)))?;
        cases += 1;
    }
    ensure(cases == 12, || format!("{cases} non-nilpotent singletons, expected 12"))?;
    Ok("12 singletons give zR with generator z".into())
}

fn c2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    for name in ["f4z2", "zmod4", "s2z4", "trivial-zmod4"] {
        let r = finite(&load(name));
        let law3 = |xs: &[Elem]| {
            let n = brute_weak_ann(&r, xs);
            let nn = brute_weak_ann(&r, &n.to_vec());
            xs.iter().all(|&x| nn.contains(x))
        };
        for x in r.elements() {
            ensure(law3(&[x]), || format!("{name}: {} not in N(N(x))", r.format(x)))?;
            checked += 1;
        }
        for _ in 0..200 {
            let x = random_subset(&r, &mut rng);
            let y = random_subset(&r, &mut rng);
            let xy: Vec<Elem> = x.iter().chain(&y).copied().collect();
            let (nx, ny, nxy) = (brute_weak_ann(&r, &x), brute_weak_ann(&r, &y), brute_weak_ann(&r, &xy));
            let lib = weak_annihilator_ring(&r, &xy).map_err(|e| e.to_string())?;
            ensure(lib.annihilator == nxy, || format!("{name}: library annihilator differs"))?;
            ensure(nxy.is_subset(&nx) && nxy.is_subset(&ny), || format!("{name}: antitone law fails"))?;
            ensure(nxy == nx.intersection(&ny), || format!("{name}: union law fails"))?;
            ensure(law3(&x) && law3(&xy), || format!("{name}: closure law fails"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} cases, zero violations"))
}

fn c3() -> Outcome {
    let e = ext("s2z4");
    let r = e.ring();
    let rep = check_compatibility(r, e.sigmas(), e.deltas(), CheckMode::Exhaustive).map_err(|e| e.to_string())?;
    ensure(!rep.sigma_compatible, || "s2z4 is strictly compatible".into())?;
    ensure(rep.weak(), || "weak compatibility fails".into())?;
    let w = rep.witness(CompatLaw::Sigma).ok_or("no witness")?;
    ensure(w.map_index == 2, || format!("witness for {}, expected s3", w.map_name))?;
    let (a, b) = w.codes.ok_or("witness without codes")?;
    let s3 = e.sigma(2);
    ensure(r.mul(a, b) != Elem::ZERO && r.mul(a, s3.apply(b)) == Elem::ZERO, || {
        "witness does not show a*s3(b) = 0 with ab != 0".into()
    })?;
    // the weak laws by brute force over all pairs
    let nil: Vec<bool> = r.elements().map(|x| brute_nilpotent(r, x)).collect();
    for s in e.sigmas() {
        for a in r.elements() {
            for b in r.elements() {
                ensure(nil[r.mul(a, b).idx()] == nil[r.mul(a, s.apply(b)).idx()], || "weak law fails".into())?;
            }
        }
    }
    Ok(format!("witness a = {}, b = {}; weak over all {} pairs", w.a, w.b, r.card() * r.card()))
}

fn c4() -> Outcome {
    let e = ext("f4z2-ext");
    let cert = certify(&e).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut nilpotent = 0;
    for _ in 0..500 {
        let f = sample_poly(&e, &mut rng, 2, 4);
        let v = is_nilpotent_poly(&f, NilMode::Both, Some(&cert)).map_err(|e| e.to_string())?;
        ensure(v.agree == Some(true), || format!("mismatch on {}", f.format()))?;
        ensure(!matches!(v.oracle, Some(OracleOutcome::NoZeroPower { .. })), || {
            format!("oracle budget exceeded on {}", f.format())
        })?;
        nilpotent += v.nilpotent as usize;
    }
    Ok(format!("500 polynomials ({nilpotent} nilpotent), zero mismatches"))
}

fn c5() -> Outcome {
    let e = ext("f4z2-ext");
    let cert = certify(&e).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for t in 0..20 {
        let n = rng.gen_range(1..=3);
        let us: Vec<SkewPoly> = (0..n).map(|_| random_poly(&e, &mut rng, 1, 3)).collect();
        let ann = weak_annihilator_ext(&e, &us, 1, AnnMode::Both, Some(&cert), DEFAULT_ENUMERATION_CAP)
            .map_err(|e| e.to_string())?;
        ensure(ann.candidates == 16u64.pow(3), || format!("{} candidates", ann.candidates))?;
        ensure(ann.agree == Some(true), || format!("trial {t}: {:?}", ann.first_divergence))?;
    }
    Ok("20 sets over 4096 candidates each, zero divergences".into())
}

fn c6() -> Outcome {
    let e = ext("f4z2-ext");
    let cert = certify(&e).map_err(|e| e.to_string())?;
    for kind in [TheoremKind::Subsets, TheoremKind::PrincipalIdeals, TheoremKind::SingleElements] {
        let rep = verify_theorem(&e, kind, 20, 7, 1, &cert).map_err(|e| e.to_string())?;
        ensure(rep.passed() && rep.failures == 0, || format!("{kind:?}: {} failures", rep.failures))?;
        ensure(rep.generators == ["z"], || format!("{kind:?}: generators {:?}", rep.generators))?;
    }
    Ok("3 x 20 trials, generator z".into())
}

fn c7() -> Outcome {
    let e = ext("f4z2-ext");
    let cert = certify(&e).map_err(|e| e.to_string())?;
    let rep = pi_armendariz_check(&e, 500, 7, &cert).map_err(|e| e.to_string())?;
    ensure(rep.pairs == 500 && rep.passed(), || format!("{} counterexamples", rep.counterexamples.len()))?;
    Ok("500 pairs, zero counterexamples".into())
}

fn c8() -> Outcome {
    let e = ext("f4z2-ext");
    let cert = certify(&e).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut done = 0;
    let mut steps = 0;
    while done < 100 {
        let f = random_poly(&e, &mut rng, 2, 4);
        if ndeg(&f).ndeg < 0 {
            continue;
        }
        let g = make_nilpotent_good(&f, &cert).map_err(|e| e.to_string())?;
        let mut last = g.initial_ndeg + 1;
        for s in &g.trace {
            ensure(s.position < last, || format!("ndeg did not decrease on {}", f.format()))?;
            last = s.position;
        }
        ensure(g.final_ndeg < last && g.final_ndeg >= 0, || format!("bad final ndeg on {}", f.format()))?;
        ensure(is_nilpotent_good(&g.poly), || format!("{} is not good", g.fr))?;
        let check = f.right_mul_const(g.r).map_err(|e| e.to_string())?;
        ensure(check == g.poly, || "fr does not match".into())?;
        steps += g.steps;
        done += 1;
    }
    Ok(format!("100 polynomials, {steps} descent steps"))
}

fn closure_elems(r: &FiniteRing, gens: &[Elem]) -> Vec<Elem> {
    right_ideal_closure(r, &ElemSet::from_elems(r.card(), gens.iter().copied())).to_vec()
}

/// Quasi-primality from the definition over the enumerated lattice.
fn brute_quasi_prime(r: &FiniteRing, lattice: &[RightIdeal], i: &RightIdeal, nil: &ElemSet) -> bool {
    if i.elements.is_subset(nil) {
        return false;
    }
    let n = brute_weak_ann(r, &i.elements.to_vec());
    lattice
        .iter()
        .filter(|j| j.elements.is_subset(&i.elements) && !j.elements.is_subset(nil))
        .all(|j| brute_weak_ann(r, &j.elements.to_vec()) == n)
}

fn c9() -> Outcome {
    let r = finite(&load("mat-kt2"));
    let lattice = enumerate_right_ideals(&r, DEFAULT_IDEAL_CAP).map_err(|e| e.to_string())?;
    let nil = ElemSet::from_elems(r.card(), r.elements().filter(|&x| brute_nilpotent(&r, x)));
    for i in &lattice {
        let cert = quasi_prime_check(&r, &lattice, i);
        ensure(cert.is_quasi_prime == brute_quasi_prime(&r, &lattice, i, &nil), || {
            "certificate disagrees with the definition".into()
        })?;
        if let Some(w) = &cert.witness {
            let sub = brute_weak_ann(&r, &closure_elems(&r, &w.sub_ideal));
            ensure(sub == w.sub_annihilator && sub != cert.annihilator, || "witness does not re-verify".into())?;
        }
    }
    let primes = nass_ring(&r, &lattice).map_err(|e| e.to_string())?;
    ensure(primes.len() == 1 && primes[0].prime == nil, || format!("{} primes", primes.len()))?;
    Ok(format!("{} right ideals, NAss = {{N(R)}} of size {}", lattice.len(), nil.len()))
}

fn c10() -> Outcome {
    let mut out = Vec::new();
    for (name, d) in [("f4z2-ext", 1), ("mat-kt2", 2)] {
        let e = ext(name);
        let cert = certify(&e).map_err(|e| e.to_string())?;
        let rep = verify_nass_extension(&e, d, 20, 10, &cert, DEFAULT_IDEAL_CAP, DEFAULT_ENUMERATION_CAP)
            .map_err(|e| e.to_string())?;
        ensure(!rep.forward.is_empty() && rep.forward.iter().all(|f| f.passed), || format!("{name}: forward fails"))?;
        ensure(!rep.backward.is_empty() && rep.backward.iter().all(|b| b.matches.is_some()), || {
            format!("{name}: backward fails")
        })?;
        ensure(rep.passed, || format!("{name}: report not passed"))?;
        out.push(format!("{name} D={d}"));
    }
    Ok(out.join(", "))
}

fn ring_laws(r: &FiniteRing, rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..1000 {
        let (a, b, c) = (r.random_elem(rng), r.random_elem(rng), r.random_elem(rng));
        ensure(r.mul(r.mul(a, b), c) == r.mul(a, r.mul(b, c)), || "ring associativity".into())?;
        ensure(r.mul(a, r.add(b, c)) == r.add(r.mul(a, b), r.mul(a, c)), || "ring left distributivity".into())?;
        ensure(r.mul(r.add(a, b), c) == r.add(r.mul(a, c), r.mul(b, c)), || "ring right distributivity".into())?;
    }
    Ok(())
}

fn ext_laws(e: &Arc<Extension>, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let err = |x: spbw::spbwalg::ExtError| x.to_string();
    for _ in 0..1000 {
        let a = random_poly(e, rng, 2, 3);
        let b = random_poly(e, rng, 2, 3);
        let c = random_poly(e, rng, 1, 3);
        let abc = a.mul(&b).map_err(err)?.mul(&c).map_err(err)?;
        ensure(abc == a.mul(&b.mul(&c).map_err(err)?).map_err(err)?, || {
            format!("associativity: {} {} {}", a.format(), b.format(), c.format())
        })?;
        let bc = b.add(&c).map_err(err)?;
        ensure(
            a.mul(&bc).map_err(err)? == a.mul(&b).map_err(err)?.add(&a.mul(&c).map_err(err)?).map_err(err)?,
            || "left distributivity".into(),
        )?;
        ensure(
            bc.mul(&a).map_err(err)? == b.mul(&a).map_err(err)?.add(&c.mul(&a).map_err(err)?).map_err(err)?,
            || "right distributivity".into(),
        )?;
    }
    Ok(())
}

fn c11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in CATALOG {
        let pres = load(p.name);
        for (name, ring) in &pres.rings {
            let tag = format!("{}/{name}", p.name);
            match ring {
                RingValue::Finite(r) => ring_laws(r, &mut rng).map_err(|e| format!("{tag}: {e}"))?,
                RingValue::Symbolic(s) => {
                    for _ in 0..1000 {
                        let (a, b, c) = (s.random(&mut rng, 9), s.random(&mut rng, 9), s.random(&mut rng, 9));
                        ensure(s.mul(&s.mul(&a, &b), &c) == s.mul(&a, &s.mul(&b, &c)), || format!("{tag}: associativity"))?;
                        ensure(s.mul(&a, &s.add(&b, &c)) == s.add(&s.mul(&a, &b), &s.mul(&a, &c)), || {
                            format!("{tag}: distributivity")
                        })?;
                    }
                }
            }
        }
        for (name, e) in &pres.extensions {
            if p.confluent == Some(true) {
                ext_laws(e, &mut rng).map_err(|x| format!("{}/{name}: {x}", p.name))?;
            }
        }
    }
    let e = ext("f4z2-ext");
    let mut count = 0;
    for alpha in monomials_up_to(e.nvars(), 3) {
        for r in e.ring().elements() {
            let closed = pow_alpha_times_r(&e, alpha, r).map_err(|x| x.to_string())?;
            let rewritten = SkewPoly::monomial(&e, alpha, e.ring().one())
                .mul(&SkewPoly::constant(&e, r))
                .map_err(|x| x.to_string())?;
            ensure(closed == rewritten, || format!("x^{alpha:?} * {} differs", e.ring().format(r)))?;
            count += 1;
        }
    }
    Ok(format!("all presets, {count} closed-form products"))
}

fn c12() -> Outcome {
    for name in ["qplane5", "usoq3-gf9", "conformal-sl2-gf5", "bq3-gf7"] {
        let rep = check_pbw_confluence(&ext(name)).map_err(|e| e.to_string())?;
        ensure(rep.confluent, || format!("{name} is not confluent: {:?}", rep.first_divergence))?;
    }
    let rep = check_pbw_confluence(&ext("broken-zyx")).map_err(|e| e.to_string())?;
    ensure(!rep.confluent, || "broken-zyx passes".into())?;
    let d = rep.first_divergence.ok_or("no witness")?;
    let word = match d.overlap {
        Overlap::Variables { k, j, i } => format!("{k} {j} {i}"),
        Overlap::Coefficient { j, i, r } => format!("{j} {i} {r}"),
    };
    Ok(format!("4 presets confluent; broken-zyx diverges on {word}: {} vs {}", d.left, d.right))
}

fn main() {
    type Check = fn() -> Outcome;
    let criteria: [(&str, u64, Check); 12] = [
        ("weak annihilators of F4[z]/(z^2)", 1, c1),
        ("Galois laws", 5, c2),
        ("compatibility witnesses on s2z4", 1, c3),
        ("nilradical of A, criterion vs oracle", 30, c4),
        ("weak annihilator in A, fast vs exhaustive", 60, c5),
        ("principal-by-nilpotent annihilators", 60, c6),
        ("Pi-Armendariz", 60, c7),
        ("nilpotent good descent", 30, c8),
        ("NAss of the matrix ring", 120, c9),
        ("NAss of extensions, bounded", 120, c10),
        ("arithmetic soundness", 60, c11),
        ("confluence", 30, c12),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if took <= Duration::from_secs(*limit) {
                Ok(msg)
            } else {
                Err(format!("{msg}, but over the {limit} s limit"))
            }
        });
        let ms = took.as_millis();
        match outcome {
            Ok(msg) => println!("criterion {:>2}: PASS  {name} ({ms} ms): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({ms} ms): {msg}", i + 1)
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
