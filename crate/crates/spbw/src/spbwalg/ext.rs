use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use thiserror::Error;

use super::monomial::{Monomial, MAX_VARS};
use crate::expr::EvalError;
use crate::finring::{Elem, FiniteRing, RingError};
use crate::ringmaps::{Derivation, RingMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtError {
    #[error("relation {j}*{i}: the coefficient of {i}*{j} must be nonzero")]
    ZeroLeadingCoefficient { j: String, i: String },
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("at most {MAX_VARS} variables are supported, got {0}")]
    TooManyVariables(usize),
    #[error("maps and extension live over different rings")]
    MixedRings,
    #[error("polynomials belong to different extensions")]
    MixedExtensions,
    #[error("the derivation attached to `{0}` is not twisted by that variable's σ")]
    SigmaMismatch(String),
    #[error("name `{0}` is declared twice or shadows a ring generator")]
    NameClash(String),
    #[error("rewriting exceeded its step cap of {0}; the presentation does not terminate")]
    NonTerminatingRewrite(u64),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// `x_j x_i = d·x_i x_j + r0 + Σ_k lin[k]·x_k` for `j > i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadRelation {
    pub d: Elem,
    pub r0: Elem,
    pub lin: Vec<Elem>,
}

impl QuadRelation {
    pub fn commuting(ring: &FiniteRing, nvars: usize) -> Self {
        QuadRelation {
            d: ring.one(),
            r0: Elem::ZERO,
            lin: vec![Elem::ZERO; nvars],
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExtOptions {
    /// Constant `C` in the rewrite step cap `C·(deg+1)^(n+1)·|terms|`.
    pub step_constant: u64,
}

impl Default for ExtOptions {
    fn default() -> Self {
        ExtOptions { step_constant: 256 }
    }
}

pub(crate) type Terms = Vec<(Monomial, Elem)>;

#[derive(Default)]
pub(crate) struct Memo {
    pub coef: RwLock<HashMap<(Monomial, Elem), Arc<Terms>>>,
    pub var: RwLock<HashMap<(Monomial, usize), Arc<Terms>>>,
    pub mono: RwLock<HashMap<(Monomial, Monomial), Arc<Terms>>>,
}

static NEXT_EXT_ID: AtomicU64 = AtomicU64::new(1);

/// A skew PBW extension `σ(R)⟨x₁,…,xₙ⟩` presented by `σ_i`, `δ_i` and
/// quadratic relations between the variables.
pub struct Extension {
    id: u64,
    name: String,
    ring: Arc<FiniteRing>,
    vars: Vec<String>,
    sigmas: Vec<RingMap>,
    deltas: Vec<Derivation>,
    /// `quad[j][i]` for `j > i`.
    quad: Vec<Vec<QuadRelation>>,
    explicit: Vec<(usize, usize)>,
    warnings: Vec<String>,
    step_constant: u64,
    pub(crate) memo: Memo,
}

impl std::fmt::Debug for Extension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Extension")
            .field("name", &self.name)
            .field("ring", &self.ring.describe())
            .field("vars", &self.vars)
            .finish()
    }
}

impl Extension {
    /// Validate and assemble. Pairs missing from `quads` commute.
    /// A `None` derivation is the zero σ_i-derivation.
    pub fn new(
        name: &str,
        ring: &Arc<FiniteRing>,
        vars: Vec<String>,
        sigmas: Vec<RingMap>,
        deltas: Vec<Option<Derivation>>,
        quads: Vec<(usize, usize, QuadRelation)>,
        opts: &ExtOptions,
    ) -> Result<Arc<Extension>, ExtError> {
        let n = vars.len();
        if n == 0 {
            return Err(ExtError::Arity("an extension needs at least one variable".into()));
        }
        if n > MAX_VARS {
            return Err(ExtError::TooManyVariables(n));
        }
        for (k, v) in vars.iter().enumerate() {
            if vars[..k].contains(v) || ring.generator(v).is_some() {
                return Err(ExtError::NameClash(v.clone()));
            }
        }
        if sigmas.len() != n || deltas.len() != n {
            return Err(ExtError::Arity(format!(
                "{n} variables but {} endomorphisms and {} derivations",
                sigmas.len(),
                deltas.len()
            )));
        }
        let same = |r: &Arc<FiniteRing>| r.id() == ring.id();
        if sigmas.iter().any(|s| !same(s.ring())) || deltas.iter().flatten().any(|d| !same(d.ring())) {
            return Err(ExtError::MixedRings);
        }
        let mut warnings = Vec::new();
        for (i, s) in sigmas.iter().enumerate() {
            if !s.is_injective() {
                warnings.push(format!(
                    "σ for `{}` ({}) is not injective; the extension is accepted but falls outside the injective setting",
                    vars[i],
                    s.name()
                ));
            }
        }
        let deltas: Vec<Derivation> = deltas
            .into_iter()
            .enumerate()
            .map(|(i, d)| match d {
                None => Ok(Derivation::zero(&sigmas[i])),
                Some(d) if d.sigma().table() == sigmas[i].table() => Ok(d),
                Some(_) => Err(ExtError::SigmaMismatch(vars[i].clone())),
            })
            .collect::<Result<_, _>>()?;

        let mut quad: Vec<Vec<QuadRelation>> = (0..n)
            .map(|j| (0..j).map(|_| QuadRelation::commuting(ring, n)).collect())
            .collect();
        let mut explicit = Vec::new();
        for (j, i, rel) in quads {
            if j >= n || i >= j {
                return Err(ExtError::Arity(format!(
                    "relation indices ({j}, {i}) must satisfy n > j > i"
                )));
            }
            if rel.lin.len() != n {
                return Err(ExtError::Arity(format!(
                    "relation {}*{} has {} linear coefficients, expected {n}",
                    vars[j],
                    vars[i],
                    rel.lin.len()
                )));
            }
            if rel.d == Elem::ZERO {
                return Err(ExtError::ZeroLeadingCoefficient {
                    j: vars[j].clone(),
                    i: vars[i].clone(),
                });
            }
            if explicit.contains(&(j, i)) {
                return Err(ExtError::NameClash(format!("{}*{}", vars[j], vars[i])));
            }
            explicit.push((j, i));
            quad[j][i] = rel;
        }
        explicit.sort();
        Ok(Arc::new(Extension {
            id: NEXT_EXT_ID.fetch_add(1, Ordering::Relaxed),
            name: name.to_string(),
            ring: Arc::clone(ring),
            vars,
            sigmas,
            deltas,
            quad,
            explicit,
            warnings,
            step_constant: opts.step_constant.max(1),
            memo: Memo::default(),
        }))
    }

    /// Commutative polynomial ring `R[x₁,…,xₙ]`.
    pub fn polynomial(ring: &Arc<FiniteRing>, vars: &[&str]) -> Result<Arc<Extension>, ExtError> {
        let n = vars.len();
        Extension::new(
            "poly",
            ring,
            vars.iter().map(|s| s.to_string()).collect(),
            (0..n).map(|_| RingMap::identity(ring)).collect(),
            vec![None; n],
            Vec::new(),
            &ExtOptions::default(),
        )
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn sigma(&self, i: usize) -> &RingMap {
        &self.sigmas[i]
    }

    pub fn sigmas(&self) -> &[RingMap] {
        &self.sigmas
    }

    pub fn delta(&self, i: usize) -> &Derivation {
        &self.deltas[i]
    }

    pub fn deltas(&self) -> &[Derivation] {
        &self.deltas
    }

    /// Relation for `x_j x_i`, `j > i`.
    pub fn quad(&self, j: usize, i: usize) -> &QuadRelation {
        &self.quad[j][i]
    }

    /// Pairs `(j, i)` with an explicitly declared relation.
    pub fn explicit_relations(&self) -> &[(usize, usize)] {
        &self.explicit
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn step_constant(&self) -> u64 {
        self.step_constant
    }

    /// `σ^α(r) = σ₁^{α₁}(⋯σₙ^{αₙ}(r))`.
    pub fn sigma_alpha(&self, alpha: &Monomial, r: Elem) -> Elem {
        let mut s = r;
        for i in (0..self.nvars()).rev() {
            for _ in 0..alpha.exp(i) {
                s = self.sigmas[i].apply(s);
            }
        }
        s
    }

    pub fn same_as(&self, other: &Extension) -> bool {
        self.id == other.id
    }

    pub fn describe(&self) -> String {
        format!(
            "{} = σ({})⟨{}⟩",
            self.name,
            self.ring.describe(),
            self.vars.join(", ")
        )
    }

    pub(crate) fn step_cap(&self, deg: u32, terms: usize) -> u64 {
        let base = (deg as u64 + 1).saturating_pow(self.nvars() as u32 + 1);
        self.step_constant
            .saturating_mul(base)
            .saturating_mul(terms.max(1) as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::{build_ring, BuildOptions, RingSpec};

    fn gf5() -> Arc<FiniteRing> {
        build_ring(&RingSpec::Zmod(5), &BuildOptions::default()).unwrap()
    }

    #[test]
    fn validation_rules() {
        let r = gf5();
        let id = || RingMap::identity(&r);
        let vars = || vec!["x".to_string(), "y".to_string()];
        let rel = |d: u32| QuadRelation {
            d: Elem(d),
            r0: Elem::ZERO,
            lin: vec![Elem::ZERO; 2],
        };
        let opts = ExtOptions::default();
        let e = Extension::new("q", &r, vars(), vec![id(), id()], vec![None, None], vec![(1, 0, rel(2))], &opts)
            .unwrap();
        assert_eq!(e.quad(1, 0).d, Elem(2));
        assert!(e.warnings().is_empty());

        let zero_d = Extension::new("q", &r, vars(), vec![id(), id()], vec![None, None], vec![(1, 0, rel(0))], &opts);
        assert!(matches!(zero_d, Err(ExtError::ZeroLeadingCoefficient { .. })));

        let wrong_way = Extension::new("q", &r, vars(), vec![id(), id()], vec![None, None], vec![(0, 1, rel(1))], &opts);
        assert!(matches!(wrong_way, Err(ExtError::Arity(_))));

        let dup = Extension::new(
            "q",
            &r,
            vec!["x".into(), "x".into()],
            vec![id(), id()],
            vec![None, None],
            vec![],
            &opts,
        );
        assert!(matches!(dup, Err(ExtError::NameClash(_))));

        let short = Extension::new("q", &r, vars(), vec![id()], vec![None, None], vec![], &opts);
        assert!(matches!(short, Err(ExtError::Arity(_))));
    }

    #[test]
    fn non_injective_sigma_warns() {
        let r = build_ring(&RingSpec::trivial(RingSpec::Zmod(4)), &BuildOptions::default()).unwrap();
        let e = r.generator("e").unwrap();
        let kill = crate::ringmaps::build_map(&r, "s3", &[("e".into(), Elem::ZERO)]).unwrap();
        assert!(!kill.is_injective());
        let ext = Extension::new(
            "s",
            &r,
            vec!["x".into()],
            vec![kill],
            vec![None],
            vec![],
            &ExtOptions::default(),
        )
        .unwrap();
        assert_eq!(ext.warnings().len(), 1);
        assert_eq!(ext.sigma_alpha(&Monomial::var(0), e), Elem::ZERO);
    }
}
