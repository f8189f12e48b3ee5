use serde::Serialize;

use super::cert::Certificate;
use super::NilError;
use crate::finring::Elem;
use crate::spbwalg::{Extension, Monomial, SkewPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NilMode {
    Criterion,
    Oracle,
    Both,
}

/// Powers above this many terms end the oracle early.
pub const ORACLE_TERM_LIMIT: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleOutcome {
    /// `f^index = 0` and no smaller power vanishes.
    Nilpotent { index: u32 },
    /// The top-degree term that leads under `priority` has a unit coefficient,
    /// all σ_i are bijective and all `d_ij` are units, so every power keeps a
    /// unit leading coefficient. With `modulo_nilradical` the chain was found
    /// after dropping terms with coefficients in `N(R)`, which is sound when
    /// `N(R)A` is a two-sided ideal: then `f^m ≡ f̄^m` modulo it, and the
    /// unit leading coefficient of `f̄^m` keeps it outside.
    UnitChain {
        priority: Vec<usize>,
        monomial: Vec<u32>,
        modulo_nilradical: bool,
    },
    /// No power up to `reached` vanished; `reached < budget` when the term
    /// limit stopped the search.
    NoZeroPower { budget: u32, reached: u32 },
}

impl OracleOutcome {
    pub fn is_nilpotent(&self) -> bool {
        matches!(self, OracleOutcome::Nilpotent { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NilVerdict {
    pub nilpotent: bool,
    pub criterion: Option<bool>,
    pub oracle: Option<OracleOutcome>,
    /// Present in both-mode: whether the two verdicts coincide.
    pub agree: Option<bool>,
}

/// `K_max = 2·t·(D+1)·n·|terms|`, `t` the nilindex of `N(R)`.
pub fn oracle_budget(f: &SkewPoly) -> u32 {
    let ext = f.ext();
    let ring = ext.ring();
    let t = ring.nil_data().nilindex.unwrap_or(ring.card()) as u64;
    let k = 2 * t * (f.degree() as u64 + 1) * ext.nvars() as u64 * f.len().max(1) as u64;
    k.min(u32::MAX as u64) as u32
}

/// All coefficients nilpotent.
pub fn coefficient_criterion(f: &SkewPoly) -> bool {
    let nil = &f.ext().ring().nil_data().nilpotents;
    f.coefficients().all(|c| nil.contains(c))
}

/// `N(R)` is an ideal stable under every σ_i and δ_i, so `N(R)A` is a
/// two-sided ideal of `A`. Checked on the tables.
fn nilradical_ideal_is_stable(ext: &Extension) -> bool {
    let nd = ext.ring().nil_data();
    nd.is_ni
        && nd.nilpotents.iter().all(|n| {
            (0..ext.nvars()).all(|i| nd.nilpotents.contains(ext.sigma(i).apply(n)) && nd.nilpotents.contains(ext.delta(i).apply(n)))
        })
}

fn unit_chain(f: &SkewPoly) -> Option<OracleOutcome> {
    if let Some(c) = unit_chain_of(f, false) {
        return Some(c);
    }
    let nil = &f.ext().ring().nil_data().nilpotents;
    if f.coefficients().any(|c| nil.contains(c)) && nilradical_ideal_is_stable(f.ext()) {
        let reduced = SkewPoly::from_terms(f.ext(), f.terms().filter(|(_, c)| !nil.contains(*c)));
        if !reduced.is_zero() {
            return unit_chain_of(&reduced, true);
        }
    }
    None
}

fn unit_chain_of(f: &SkewPoly, modulo_nilradical: bool) -> Option<OracleOutcome> {
    let ext = f.ext();
    let ring = ext.ring();
    let units = &ring.nil_data().units;
    let n = ext.nvars();
    if !ext.sigmas().iter().all(|s| s.is_injective()) {
        return None;
    }
    for &(j, i) in ext.explicit_relations() {
        if !units.contains(ext.quad(j, i).d) {
            return None;
        }
    }
    let top = f.degree();
    let comp: Vec<(Monomial, Elem)> = f.terms().filter(|(m, _)| m.degree() == top).collect();
    for shift in 0..n {
        let priority: Vec<usize> = (0..n).map(|k| (n - 1 + n - k + shift) % n).collect();
        let key = |m: &Monomial| priority.iter().map(|&v| m.exp(v)).collect::<Vec<_>>();
        let (m, c) = comp.iter().max_by_key(|(m, _)| key(m))?;
        if units.contains(*c) {
            return Some(OracleOutcome::UnitChain {
                priority,
                monomial: m.exps(n),
                modulo_nilradical,
            });
        }
    }
    None
}

/// Search for a vanishing power of `f` up to `budget`.
pub fn power_oracle(f: &SkewPoly, budget: u32) -> Result<OracleOutcome, NilError> {
    if f.is_zero() {
        return Ok(OracleOutcome::Nilpotent { index: 1 });
    }
    if let Some(chain) = unit_chain(f) {
        return Ok(chain);
    }
    let mut p = f.clone();
    for k in 1..=budget {
        if p.is_zero() {
            return Ok(OracleOutcome::Nilpotent { index: k });
        }
        if k == budget || p.len() > ORACLE_TERM_LIMIT {
            return Ok(OracleOutcome::NoZeroPower { budget, reached: k });
        }
        p = p.mul(f)?;
    }
    Ok(OracleOutcome::NoZeroPower { budget, reached: budget })
}

/// Nilpotency of `f` in the extension. The criterion needs `cert` to hold
/// weak compatibility and NI.
pub fn is_nilpotent_poly(f: &SkewPoly, mode: NilMode, cert: Option<&Certificate>) -> Result<NilVerdict, NilError> {
    let criterion = match mode {
        NilMode::Oracle => None,
        _ => {
            let cert = cert.ok_or_else(|| {
                NilError::HypothesisNotCertified("the coefficient criterion needs a certificate".into())
            })?;
            cert.require_weak_ni("the coefficient criterion")?;
            Some(coefficient_criterion(f))
        }
    };
    let oracle = match mode {
        NilMode::Criterion => None,
        _ => Some(power_oracle(f, oracle_budget(f))?),
    };
    let agree = match (&criterion, &oracle) {
        (Some(c), Some(o)) => {
            if *c && !o.is_nilpotent() {
                return Err(NilError::OracleBudgetExceeded {
                    poly: f.format(),
                    budget: oracle_budget(f),
                });
            }
            Some(*c == o.is_nilpotent())
        }
        _ => None,
    };
    let nilpotent = match (&criterion, &oracle) {
        (_, Some(o)) => o.is_nilpotent(),
        (Some(c), None) => *c,
        (None, None) => unreachable!(),
    };
    Ok(NilVerdict {
        nilpotent,
        criterion,
        oracle,
        agree,
    })
}
