//! Normal-form multiplication. Three memoized kernels do all the rewriting:
//! `x^μ·r`, `x^γ·x_i` and `x^γ·x^β`; a product of polynomials is assembled
//! from them term by term. Every kernel call that misses the memo counts as a
//! rewrite step against the per-product cap.

use std::cell::Cell;
use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use super::ext::{ExtError, Extension, Terms};
use super::monomial::Monomial;
use super::poly::{accumulate, finish};
use crate::finring::Elem;

pub(crate) struct Budget {
    used: Cell<u64>,
    cap: u64,
}

impl Budget {
    pub(crate) fn new(cap: u64) -> Self {
        Budget {
            used: Cell::new(0),
            cap,
        }
    }

    pub(crate) fn step(&self) -> Result<(), ExtError> {
        let u = self.used.get() + 1;
        self.used.set(u);
        if u > self.cap {
            Err(ExtError::NonTerminatingRewrite(self.cap))
        } else {
            Ok(())
        }
    }
}

fn lookup<K: Eq + Hash>(map: &RwLock<HashMap<K, Arc<Terms>>>, k: &K) -> Option<Arc<Terms>> {
    map.read().expect("memo lock").get(k).cloned()
}

fn store<K: Eq + Hash>(map: &RwLock<HashMap<K, Arc<Terms>>>, k: K, v: Terms) -> Arc<Terms> {
    let mut w = map.write().expect("memo lock");
    match w.entry(k) {
        Entry::Occupied(o) => Arc::clone(o.get()),
        Entry::Vacant(slot) => Arc::clone(slot.insert(Arc::new(v))),
    }
}

impl Extension {
    /// `x^μ · r`.
    pub(crate) fn coef_kernel(&self, mu: Monomial, r: Elem, b: &Budget) -> Result<Arc<Terms>, ExtError> {
        if r == Elem::ZERO {
            return Ok(Arc::new(Vec::new()));
        }
        if mu.is_one() {
            return Ok(Arc::new(vec![(Monomial::ONE, r)]));
        }
        if let Some(t) = lookup(&self.memo.coef, &(mu, r)) {
            return Ok(t);
        }
        b.step()?;
        // x^μ r = x^{μ'} (σ_i(r) x_i + δ_i(r)), x_i the last variable of μ
        let i = mu.last_var().expect("nonconstant");
        let rest = mu.without_var(i);
        let ring = self.ring();
        let mut acc = BTreeMap::new();
        let head = self.coef_kernel(rest, self.sigma(i).apply(r), b)?;
        for &(g, c) in head.iter() {
            for &(m, e) in self.var_kernel(g, i, b)?.iter() {
                accumulate(ring, &mut acc, m, ring.mul(c, e));
            }
        }
        for &(m, e) in self.coef_kernel(rest, self.delta(i).apply(r), b)?.iter() {
            accumulate(ring, &mut acc, m, e);
        }
        Ok(store(&self.memo.coef, (mu, r), finish(acc)))
    }

    /// `x^γ · x_i`.
    pub(crate) fn var_kernel(&self, gamma: Monomial, i: usize, b: &Budget) -> Result<Arc<Terms>, ExtError> {
        let j = match gamma.last_var() {
            Some(j) if j > i => j,
            _ => return Ok(Arc::new(vec![(gamma.with_var(i), self.ring().one())])),
        };
        if let Some(t) = lookup(&self.memo.var, &(gamma, i)) {
            return Ok(t);
        }
        b.step()?;
        // x^{γ'} x_j x_i = x^{γ'} (d x_i x_j + r0 + Σ lin_k x_k)
        let rest = gamma.without_var(j);
        let rel = self.quad(j, i);
        let ring = self.ring();
        let mut acc = BTreeMap::new();
        for &(g, c) in self.coef_kernel(rest, rel.d, b)?.iter() {
            for &(h, e) in self.var_kernel(g, i, b)?.iter() {
                let ce = ring.mul(c, e);
                if ce == Elem::ZERO {
                    continue;
                }
                for &(m, f) in self.var_kernel(h, j, b)?.iter() {
                    accumulate(ring, &mut acc, m, ring.mul(ce, f));
                }
            }
        }
        for &(m, e) in self.coef_kernel(rest, rel.r0, b)?.iter() {
            accumulate(ring, &mut acc, m, e);
        }
        for (k, &lk) in rel.lin.iter().enumerate() {
            for &(g, c) in self.coef_kernel(rest, lk, b)?.iter() {
                for &(m, e) in self.var_kernel(g, k, b)?.iter() {
                    accumulate(ring, &mut acc, m, ring.mul(c, e));
                }
            }
        }
        Ok(store(&self.memo.var, (gamma, i), finish(acc)))
    }

    /// `x^γ · x^β`.
    pub(crate) fn mono_kernel(&self, gamma: Monomial, beta: Monomial, b: &Budget) -> Result<Arc<Terms>, ExtError> {
        if beta.is_one() {
            return Ok(Arc::new(vec![(gamma, self.ring().one())]));
        }
        if gamma.last_var().map_or(true, |j| Some(j) <= beta.first_var()) {
            return Ok(Arc::new(vec![(gamma.times(&beta), self.ring().one())]));
        }
        if let Some(t) = lookup(&self.memo.mono, &(gamma, beta)) {
            return Ok(t);
        }
        b.step()?;
        // peel the last variable of β: x^γ x^{β'} x_k
        let k = beta.last_var().expect("nonconstant");
        let ring = self.ring();
        let mut acc = BTreeMap::new();
        for &(g, c) in self.mono_kernel(gamma, beta.without_var(k), b)?.iter() {
            for &(m, e) in self.var_kernel(g, k, b)?.iter() {
                accumulate(ring, &mut acc, m, ring.mul(c, e));
            }
        }
        Ok(store(&self.memo.mono, (gamma, beta), finish(acc)))
    }

    pub(crate) fn nf_mul_terms(&self, f: &Terms, g: &Terms) -> Result<Terms, ExtError> {
        if f.is_empty() || g.is_empty() {
            return Ok(Vec::new());
        }
        let deg = f.last().unwrap().0.degree() + g.last().unwrap().0.degree();
        let budget = Budget::new(self.step_cap(deg, f.len() * g.len()));
        let ring = self.ring();
        let mut acc = BTreeMap::new();
        // a x^α · b x^β = a (x^α b) x^β
        for &(alpha, a) in f {
            for &(beta, bc) in g {
                for &(gam, c) in self.coef_kernel(alpha, bc, &budget)?.iter() {
                    let ac = ring.mul(a, c);
                    if ac == Elem::ZERO {
                        continue;
                    }
                    for &(m, e) in self.mono_kernel(gam, beta, &budget)?.iter() {
                        accumulate(ring, &mut acc, m, ring.mul(ac, e));
                    }
                }
            }
        }
        Ok(finish(acc))
    }

    /// Memo sizes `(coefficient, variable, monomial)`, for diagnostics.
    pub fn memo_sizes(&self) -> (usize, usize, usize) {
        (
            self.memo.coef.read().expect("memo lock").len(),
            self.memo.var.read().expect("memo lock").len(),
            self.memo.mono.read().expect("memo lock").len(),
        )
    }
}
