//! Small extensions built directly in code, for tests and documentation.
//! The shipped presets live in presentation files under the shell module.

use std::sync::Arc;

use super::ext::{ExtError, ExtOptions, Extension, QuadRelation};
use crate::finring::{build_ring, BuildOptions, Elem, FiniteRing, RingSpec};
use crate::ringmaps::{build_derivation, build_map, RingMap};

fn ring(spec: RingSpec) -> Result<Arc<FiniteRing>, ExtError> {
    Ok(build_ring(&spec, &BuildOptions { cap: 4096 })?)
}

fn map_err(e: crate::ringmaps::MapError) -> ExtError {
    match e {
        crate::ringmaps::MapError::Ring(r) => ExtError::Ring(r),
        other => ExtError::Arity(other.to_string()),
    }
}

/// `𝔽₄[z]/⟨z²⟩`.
pub fn f4z2_ring() -> Result<Arc<FiniteRing>, ExtError> {
    ring(RingSpec::quotient(RingSpec::gf(4), "z", vec![0, 0, 1]))
}

/// `σ_{i,j}`: `a ↦ a^i`, `z ↦ a^j z` on `𝔽₄[z]/⟨z²⟩`.
pub fn f4z2_sigma(r: &Arc<FiniteRing>, i: u64, j: u64) -> Result<RingMap, ExtError> {
    let a = r.generator("a").expect("generator a");
    let z = r.generator("z").expect("generator z");
    build_map(
        r,
        &format!("s{i}{j}"),
        &[("a".into(), r.pow(a, i)), ("z".into(), r.mul(r.pow(a, j), z))],
    )
    .map_err(map_err)
}

/// Two commuting variables over `𝔽₄[z]/⟨z²⟩` twisted by `σ_{1,1}` and `σ_{1,2}`.
pub fn f4z2_extension() -> Result<Arc<Extension>, ExtError> {
    f4z2_extension_with(&ExtOptions::default())
}

pub fn f4z2_extension_with(opts: &ExtOptions) -> Result<Arc<Extension>, ExtError> {
    let r = f4z2_ring()?;
    let sigmas = vec![f4z2_sigma(&r, 1, 1)?, f4z2_sigma(&r, 1, 2)?];
    Extension::new(
        "f4z2-ext",
        &r,
        vec!["x1".into(), "x2".into()],
        sigmas,
        vec![None, None],
        vec![],
        opts,
    )
}

/// Quantum plane over `GF(p)`: `y x = q·x y`.
pub fn quantum_plane(p: u64, q: u32) -> Result<Arc<Extension>, ExtError> {
    let r = ring(RingSpec::Zmod(p))?;
    let qe = Elem(q % p as u32);
    Extension::new(
        "qplane",
        &r,
        vec!["x".into(), "y".into()],
        vec![RingMap::identity(&r), RingMap::identity(&r)],
        vec![None, None],
        vec![(1, 0, QuadRelation { d: qe, r0: Elem::ZERO, lin: vec![Elem::ZERO; 2] })],
        &ExtOptions::default(),
    )
}

/// Over `𝔽₂[t]/⟨t²⟩`: `x t = t x + 1`, `y` central in `R`, `y x = x y + y`.
pub fn weyl_like() -> Result<Arc<Extension>, ExtError> {
    let r = ring(RingSpec::quotient(RingSpec::Zmod(2), "t", vec![0, 0, 1]))?;
    let id = RingMap::identity(&r);
    let d = build_derivation(&r, "d", &id, &[("t".into(), r.one())]).map_err(map_err)?;
    let one = r.one();
    Extension::new(
        "weyl-like",
        &r,
        vec!["x".into(), "y".into()],
        vec![id.clone(), id],
        vec![Some(d), None],
        vec![(1, 0, QuadRelation { d: one, r0: Elem::ZERO, lin: vec![Elem::ZERO, one] })],
        &ExtOptions::default(),
    )
}

/// Three variables over `GF(5)` whose relations do not resolve the overlap
/// `z y x` consistently.
pub fn inconsistent_example() -> Result<Arc<Extension>, ExtError> {
    let r = ring(RingSpec::Zmod(5))?;
    let id = RingMap::identity(&r);
    let zero3 = vec![Elem::ZERO; 3];
    let mut zy_lin = zero3.clone();
    zy_lin[0] = r.one();
    Extension::new(
        "inconsistent",
        &r,
        vec!["x".into(), "y".into(), "z".into()],
        vec![id.clone(), id.clone(), id],
        vec![None, None, None],
        vec![
            (1, 0, QuadRelation { d: Elem(2), r0: Elem::ZERO, lin: zero3.clone() }),
            (2, 1, QuadRelation { d: r.one(), r0: Elem::ZERO, lin: zy_lin }),
        ],
        &ExtOptions::default(),
    )
}
