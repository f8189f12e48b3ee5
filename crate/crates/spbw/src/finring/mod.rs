//! Finite coefficient rings: constructive presets, canonical element codes,
//! table arithmetic, and nilpotent structure. Two infinite rings (the
//! integers and polynomials over a finite field) are available in
//! [`symbolic`] for pointwise work only.

mod elemset;
mod nil;
mod ring;
mod spec;
pub mod symbolic;

use std::sync::Arc;

use thiserror::Error;

use crate::expr::{EvalError, SyntaxError};

pub use elemset::ElemSet;
pub use nil::{additive_closure, nil_data, NiWitness, NilData};
pub use ring::{build_ring, BuildOptions, FiniteRing, Generator};
pub use spec::RingSpec;

/// Canonical code of an element of a finite ring, in `0..cardinality`.
/// Code 0 is always the zero element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// Cardinality cap used when no explicit cap is given;
/// `SPBW_CAP` overrides the built-in 256.
pub fn default_cap() -> u64 {
    std::env::var("SPBW_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(256)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("modulus {0} is not irreducible")]
    NonIrreducibleModulus(String),
    #[error("cardinality {cardinality} exceeds the cap {cap} (raise it with --cap or SPBW_CAP)")]
    CardinalityOverCap { cardinality: String, cap: u64 },
    #[error("malformed preset: {0}")]
    MalformedPreset(String),
    #[error("elements belong to different rings")]
    MixedRings,
    #[error("operation needs a finite ring: {0}")]
    SymbolicRingUnsupported(String),
    #[error("ring axiom fails: {0}")]
    AxiomViolation(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// An element bundled with its ring, for checked mixed arithmetic.
#[derive(Clone, Debug)]
pub struct RingElem {
    pub ring: Arc<FiniteRing>,
    pub elem: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Neg,
}

impl RingElem {
    pub fn new(ring: &Arc<FiniteRing>, elem: Elem) -> Self {
        RingElem {
            ring: Arc::clone(ring),
            elem,
        }
    }
}

impl std::fmt::Display for RingElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.ring.format(self.elem))
    }
}

/// Exact `a op b` (`b` is ignored for negation but must share the ring).
pub fn ring_arith(a: &RingElem, b: &RingElem, op: ArithOp) -> Result<RingElem, RingError> {
    if a.ring.id() != b.ring.id() {
        return Err(RingError::MixedRings);
    }
    let r = &a.ring;
    let elem = match op {
        ArithOp::Add => r.add(a.elem, b.elem),
        ArithOp::Mul => r.mul(a.elem, b.elem),
        ArithOp::Neg => r.neg(a.elem),
    };
    Ok(RingElem::new(r, elem))
}

/// Every element in canonical code order.
pub fn enumerate_elements(ring: &FiniteRing) -> Vec<Elem> {
    ring.elements().collect()
}

/// `r^m = 0` for some `m ≤ |R|`.
pub fn is_nilpotent(ring: &FiniteRing, r: Elem) -> bool {
    ring.nil_data().nilpotents.contains(r)
}
