use std::sync::Arc;

use serde::Serialize;

use super::ext::{ExtError, Extension};
use super::monomial::Monomial;
use super::poly::SkewPoly;
use crate::finring::Elem;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Overlap {
    /// `(x_k x_j) x_i` against `x_k (x_j x_i)`.
    Variables { k: String, j: String, i: String },
    /// `(x_j x_i) r` against `x_j (x_i r)`.
    Coefficient { j: String, i: String, r: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct Divergence {
    pub overlap: Overlap,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfluenceReport {
    pub confluent: bool,
    pub variable_overlaps: usize,
    pub coefficient_overlaps: usize,
    pub first_divergence: Option<Divergence>,
    /// Which overlaps were examined; the verdict says nothing beyond them.
    pub checked_bound: String,
}

/// Reduced form of `x_j x_i` for `j > i`.
fn relation_poly(ext: &Arc<Extension>, j: usize, i: usize) -> SkewPoly {
    let rel = ext.quad(j, i);
    let mut terms = vec![
        (Monomial::var(i).with_var(j), rel.d),
        (Monomial::ONE, rel.r0),
    ];
    for (k, &c) in rel.lin.iter().enumerate() {
        terms.push((Monomial::var(k), c));
    }
    SkewPoly::from_terms(ext, terms)
}

/// `σ_i(r) x_i + δ_i(r)`.
fn commuted(ext: &Arc<Extension>, i: usize, r: Elem) -> SkewPoly {
    SkewPoly::from_terms(
        ext,
        [
            (Monomial::var(i), ext.sigma(i).apply(r)),
            (Monomial::ONE, ext.delta(i).apply(r)),
        ],
    )
}

/// Resolve every degree-3 variable overlap and every variable-variable-
/// coefficient overlap both ways and compare the normal forms.
pub fn check_pbw_confluence(ext: &Arc<Extension>) -> Result<ConfluenceReport, ExtError> {
    let n = ext.nvars();
    let names = ext.var_names();
    let ring = ext.ring();
    let mut first = None;
    let mut var_count = 0;
    let mut coef_count = 0;

    'outer: for k in 0..n {
        for j in 0..k {
            for i in 0..j {
                var_count += 1;
                let left = relation_poly(ext, k, j).mul(&SkewPoly::var(ext, i))?;
                let right = SkewPoly::var(ext, k).mul(&relation_poly(ext, j, i))?;
                if left != right {
                    first = Some(Divergence {
                        overlap: Overlap::Variables {
                            k: names[k].clone(),
                            j: names[j].clone(),
                            i: names[i].clone(),
                        },
                        left: left.format(),
                        right: right.format(),
                    });
                    break 'outer;
                }
            }
        }
    }
    if first.is_none() {
        'coef: for j in 0..n {
            for i in 0..j {
                for r in ring.elements() {
                    coef_count += 1;
                    let left = relation_poly(ext, j, i).mul(&SkewPoly::constant(ext, r))?;
                    let right = SkewPoly::var(ext, j).mul(&commuted(ext, i, r))?;
                    if left != right {
                        first = Some(Divergence {
                            overlap: Overlap::Coefficient {
                                j: names[j].clone(),
                                i: names[i].clone(),
                                r: ring.format(r),
                            },
                            left: left.format(),
                            right: right.format(),
                        });
                        break 'coef;
                    }
                }
            }
        }
    }
    Ok(ConfluenceReport {
        confluent: first.is_none(),
        variable_overlaps: var_count,
        coefficient_overlaps: coef_count,
        first_divergence: first,
        checked_bound: format!(
            "all words x_k x_j x_i (k > j > i) and x_j x_i r (j > i) for all {} coefficients",
            ring.card()
        ),
    })
}
