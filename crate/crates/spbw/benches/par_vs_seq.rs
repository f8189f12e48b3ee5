//! The same workloads on the default rayon pool and on a one-thread pool.
//! Built without the `parallel` feature both arms run the sequential path.

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spbw::assocprimes::{enumerate_right_ideals, nass_ring};
use spbw::finring::{build_ring, BuildOptions, FiniteRing, RingSpec};
use spbw::nilweak::{certify, weak_annihilator_ext, AnnMode, DEFAULT_ENUMERATION_CAP};
use spbw::ringmaps::{check_compatibility, CheckMode};
use spbw::shell::{elaborate, presets, ElabOptions};
use spbw::spbwalg::{random_poly, Extension};

fn preset_ext(name: &str) -> Arc<Extension> {
    let pres = elaborate(presets::source(name).unwrap(), &ElabOptions::default()).unwrap();
    pres.active_extension().unwrap().clone()
}

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    vec![("sequential", one), ("parallel", all)]
}

fn bench(c: &mut Criterion) {
    let ext = preset_ext("f4z2-ext");
    let cert = certify(&ext).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let us = vec![random_poly(&ext, &mut rng, 1, 3)];
    let s2z4 = preset_ext("s2z4");
    let big: Arc<FiniteRing> = build_ring(&RingSpec::Zmod(64), &BuildOptions::default()).unwrap();

    let mut g = c.benchmark_group("par_vs_seq");
    g.sample_size(10);
    for (label, pool) in pools() {
        g.bench_function(BenchmarkId::new("weak_ann_brute_f4z2_deg1", label), |b| {
            b.iter(|| {
                pool.install(|| {
                    weak_annihilator_ext(&ext, &us, 1, AnnMode::Brute, Some(&cert), DEFAULT_ENUMERATION_CAP).unwrap()
                })
            })
        });
        g.bench_function(BenchmarkId::new("compat_exhaustive_s2z4", label), |b| {
            b.iter(|| {
                pool.install(|| check_compatibility(s2z4.ring(), s2z4.sigmas(), s2z4.deltas(), CheckMode::Exhaustive).unwrap())
            })
        });
        g.bench_function(BenchmarkId::new("nass_zmod64", label), |b| {
            b.iter(|| {
                pool.install(|| {
                    let lattice = enumerate_right_ideals(&big, 64).unwrap();
                    nass_ring(&big, &lattice).unwrap()
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
