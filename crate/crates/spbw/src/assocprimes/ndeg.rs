use serde::Serialize;

use super::AssocError;
use crate::finring::Elem;
use crate::nilweak::{weak_ann_single, Certificate};
use crate::spbwalg::SkewPoly;

#[derive(Clone, Debug, Serialize)]
pub struct NdegData {
    pub poly: String,
    /// Position in the ascending support, or -1.
    pub ndeg: i64,
    pub monomial: Option<String>,
    pub is_good: bool,
    /// Least position `i ≤ ndeg` with `N_R(r_k) ⊄ N_R(r_i)`.
    pub offending: Option<usize>,
}

pub fn ndeg(f: &SkewPoly) -> NdegData {
    let ring = f.ext().ring();
    let nil = &ring.nil_data().nilpotents;
    let support = f.support_ascending();
    let k = support.iter().rposition(|(_, c)| !nil.contains(*c));
    let offending = k.and_then(|k| {
        let top = weak_ann_single(ring, support[k].1);
        (0..k).find(|&i| !top.is_subset(&weak_ann_single(ring, support[i].1)))
    });
    NdegData {
        poly: f.format(),
        ndeg: k.map_or(-1, |k| k as i64),
        monomial: k.map(|k| support[k].0.format(f.ext().var_names())),
        is_good: offending.is_none(),
        offending,
    }
}

pub fn is_nilpotent_good(f: &SkewPoly) -> bool {
    ndeg(f).is_good
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentStep {
    pub position: i64,
    pub offending: usize,
    pub multiplier: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GoodResult {
    pub r: Elem,
    pub r_display: String,
    pub fr: String,
    pub steps: usize,
    pub trace: Vec<DescentStep>,
    pub initial_ndeg: i64,
    pub final_ndeg: i64,
    #[serde(skip)]
    pub poly: SkewPoly,
}

/// Right-multiply `f` by constants until it is nilpotent good: at each step
/// take the least-code `b ∈ N_R(r_k) \ N_R(r_i)` for the least offending `i`.
pub fn make_nilpotent_good(f: &SkewPoly, cert: &Certificate) -> Result<GoodResult, AssocError> {
    cert.require_strict_ni("nilpotent good descent")?;
    let ext = f.ext();
    let ring = ext.ring();
    let start = ndeg(f);
    if start.ndeg < 0 {
        return Err(AssocError::PreconditionNilpotent(f.format()));
    }
    let mut g = f.clone();
    let mut r = ring.one();
    let mut data = start.clone();
    let mut trace = Vec::new();
    while let Some(i) = data.offending {
        let support = g.support_ascending();
        let k = data.ndeg as usize;
        let top = weak_ann_single(ring, support[k].1);
        let low = weak_ann_single(ring, support[i].1);
        let stuck = |why: &str| AssocError::DescentStuck {
            poly: g.format(),
            step: trace.len(),
            detail: why.to_string(),
        };
        let Some(b) = top.iter().find(|&b| !low.contains(b)) else {
            return Err(stuck("N_R(r_k) ⊆ N_R(r_i) despite the offending index"));
        };
        let next = g.right_mul_const(b)?;
        let nd = ndeg(&next);
        if nd.ndeg < 0 {
            return Err(stuck("the product fell into N(R)A"));
        }
        if nd.ndeg >= data.ndeg {
            return Err(stuck("the nilpotent degree did not decrease"));
        }
        trace.push(DescentStep {
            position: data.ndeg,
            offending: i,
            multiplier: ring.format(b),
        });
        r = ring.mul(r, b);
        g = next;
        data = nd;
    }
    Ok(GoodResult {
        r,
        r_display: ring.format(r),
        fr: g.format(),
        steps: trace.len(),
        trace,
        initial_ndeg: start.ndeg,
        final_ndeg: data.ndeg,
        poly: g,
    })
}
