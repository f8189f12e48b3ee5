//! Maps on the integer-based symbolic rings. A map is determined by the
//! images of an additive basis over the integers and extended linearly; the
//! laws are checked exactly on basis pairs, which suffices by bilinearity.

use std::collections::HashMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CheckMode, CompatLaw, CompatReport, CompatWitness, MapError};
use crate::finring::symbolic::{SymRing, SymValue};
use crate::finring::RingError;

#[derive(Clone, Debug)]
pub struct SymMap {
    ring: Arc<SymRing>,
    name: String,
    basis: Vec<SymValue>,
    images: Vec<SymValue>,
}

#[derive(Clone, Debug)]
pub struct SymDerivation {
    name: String,
    sigma: SymMap,
    images: Vec<SymValue>,
}

fn linear(ring: &SymRing, images: &[SymValue], v: &SymValue) -> SymValue {
    let coords = ring.int_coords(v).expect("integer-based ring");
    coords
        .iter()
        .zip(images)
        .fold(ring.zero(), |acc, (c, img)| ring.add(&acc, &ring.int_scale(c, img)))
}

/// Basis images from generator images: each basis element is either the
/// identity or one of the canonical generators.
fn basis_images(
    ring: &SymRing,
    images: &[(String, SymValue)],
    one_image: SymValue,
) -> Result<(Vec<SymValue>, Vec<SymValue>), MapError> {
    let basis = ring.int_basis().ok_or_else(|| {
        RingError::SymbolicRingUnsupported(format!("maps on {}", ring.describe()))
    })?;
    let given: HashMap<&str, &SymValue> = images.iter().map(|(n, v)| (n.as_str(), v)).collect();
    for (name, _) in images {
        if !ring.generators().iter().any(|(n, _)| n == name) {
            return Err(MapError::UnknownGenerator(name.clone()));
        }
    }
    for (name, _) in ring.generators() {
        if !given.contains_key(name.as_str()) {
            return Err(MapError::GeneratorImageMissing(name.clone()));
        }
    }
    let mut out = Vec::with_capacity(basis.len());
    for b in &basis {
        if *b == ring.one() {
            out.push(one_image.clone());
            continue;
        }
        let (name, _) = ring
            .generators()
            .iter()
            .find(|(_, g)| g == b)
            .ok_or_else(|| RingError::SymbolicRingUnsupported("basis element without a name".into()))?;
        out.push(given[name.as_str()].clone());
    }
    Ok((basis, out))
}

impl SymMap {
    pub fn build(
        ring: &Arc<SymRing>,
        name: &str,
        images: &[(String, SymValue)],
    ) -> Result<Self, MapError> {
        let (basis, imgs) = basis_images(ring, images, ring.one())?;
        let map = SymMap {
            ring: Arc::clone(ring),
            name: name.to_string(),
            basis,
            images: imgs,
        };
        let r = &*map.ring;
        if map.apply(&r.one()) != r.one() {
            return Err(MapError::NotAHomomorphism("1 is not fixed".into()));
        }
        for x in &map.basis {
            for y in &map.basis {
                let lhs = map.apply(&r.mul(x, y));
                let rhs = r.mul(&map.apply(x), &map.apply(y));
                if lhs != rhs {
                    return Err(MapError::NotAHomomorphism(format!(
                        "a = {}, b = {}: image of ab is {} but images multiply to {}",
                        r.format(x),
                        r.format(y),
                        r.format(&lhs),
                        r.format(&rhs)
                    )));
                }
            }
        }
        Ok(map)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> &Arc<SymRing> {
        &self.ring
    }

    pub fn apply(&self, v: &SymValue) -> SymValue {
        linear(&self.ring, &self.images, v)
    }
}

impl SymDerivation {
    pub fn build(
        sigma: &SymMap,
        name: &str,
        images: &[(String, SymValue)],
    ) -> Result<Self, MapError> {
        let r = &*sigma.ring;
        let (basis, imgs) = basis_images(r, images, r.zero())?;
        let d = SymDerivation {
            name: name.to_string(),
            sigma: sigma.clone(),
            images: imgs,
        };
        if d.apply(&r.one()) != r.zero() {
            return Err(MapError::NotADerivation("δ(1) is not 0".into()));
        }
        for x in &basis {
            for y in &basis {
                let lhs = d.apply(&r.mul(x, y));
                let rhs = r.add(&r.mul(&sigma.apply(x), &d.apply(y)), &r.mul(&d.apply(x), y));
                if lhs != rhs {
                    return Err(MapError::NotADerivation(format!(
                        "a = {}, b = {}: δ(ab) = {} but σ(a)δ(b) + δ(a)b = {}",
                        r.format(x),
                        r.format(y),
                        r.format(&lhs),
                        r.format(&rhs)
                    )));
                }
            }
        }
        Ok(d)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, v: &SymValue) -> SymValue {
        linear(&self.sigma.ring, &self.images, v)
    }
}

/// Sampled compatibility on a symbolic ring; entries are drawn from
/// `[-bound, bound]`. Exhaustive mode is refused.
pub fn check_compatibility_sym(
    ring: &Arc<SymRing>,
    sigmas: &[SymMap],
    deltas: &[SymDerivation],
    mode: CheckMode,
    bound: i64,
) -> Result<CompatReport, MapError> {
    let CheckMode::Sampled { count, seed } = mode else {
        return Err(MapError::SymbolicNeedsSampledMode);
    };
    if sigmas.iter().any(|m| !Arc::ptr_eq(&m.ring, ring))
        || deltas.iter().any(|d| !Arc::ptr_eq(&d.sigma.ring, ring))
    {
        return Err(MapError::MixedRings);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(SymValue, SymValue)> = (0..count)
        .map(|_| (ring.random(&mut rng, bound), ring.random(&mut rng, bound)))
        .collect();
    let r = &**ring;
    let zero = r.zero();
    let in_zero = |v: &SymValue| Ok::<bool, MapError>(*v == zero);
    let in_nil = |v: &SymValue| Ok::<bool, MapError>(r.is_nilpotent(v)?);

    let mut witnesses = Vec::new();
    let mut verdicts = [true; 4];
    type Member<'a> = &'a dyn Fn(&SymValue) -> Result<bool, MapError>;
    let classes: [(Member, CompatLaw, CompatLaw); 2] = [
        (&in_zero, CompatLaw::Sigma, CompatLaw::Delta),
        (&in_nil, CompatLaw::WeakSigma, CompatLaw::WeakDelta),
    ];
    for (ci, (member, s_law, d_law)) in classes.iter().enumerate() {
        for (i, m) in sigmas.iter().enumerate() {
            for (a, b) in &pairs {
                let ab = r.mul(a, b);
                let tw = r.mul(a, &m.apply(b));
                if member(&ab)? != member(&tw)? {
                    verdicts[ci * 2] = false;
                    witnesses.push(sym_witness(r, *s_law, i, m.name(), a, b, &ab, &tw));
                    break;
                }
            }
        }
        for (i, d) in deltas.iter().enumerate() {
            for (a, b) in &pairs {
                let ab = r.mul(a, b);
                let tw = r.mul(a, &d.apply(b));
                if member(&ab)? && !member(&tw)? {
                    verdicts[ci * 2 + 1] = false;
                    witnesses.push(sym_witness(r, *d_law, i, d.name(), a, b, &ab, &tw));
                    break;
                }
            }
        }
    }
    Ok(CompatReport {
        sigma_compatible: verdicts[0],
        delta_compatible: verdicts[1],
        weak_sigma: verdicts[2],
        weak_delta: verdicts[3],
        witnesses,
        mode,
    })
}

#[allow(clippy::too_many_arguments)]
fn sym_witness(
    r: &SymRing,
    law: CompatLaw,
    map_index: usize,
    name: &str,
    a: &SymValue,
    b: &SymValue,
    ab: &SymValue,
    tw: &SymValue,
) -> CompatWitness {
    CompatWitness {
        law,
        map_index,
        map_name: name.to_string(),
        a: r.format(a),
        b: r.format(b),
        product: r.format(ab),
        twisted: r.format(tw),
        codes: None,
    }
}
