//! `x^α · r` by the explicit expansion
//!
//! ```text
//! x^α r = σ^α(r) x^α
//!       + Σ_{k=n}^{1} x₁^{α₁}⋯x_{k-1}^{α_{k-1}}
//!           ( Σ_{j=1}^{α_k} x_k^{α_k-j} δ_k(σ_k^{j-1}(s_k)) x_k^{j-1} )
//!           x_{k+1}^{α_{k+1}}⋯xₙ^{αₙ},     s_k = σ_{k+1}^{α_{k+1}}⋯σₙ^{αₙ}(r).
//! ```
//!
//! Each summand is a coefficient sandwiched between a standard prefix and a
//! word. The prefix is pushed past the coefficient by recursion on degree, and
//! the resulting words are sorted by a plain word-rewriting loop. Nothing here
//! touches the memoized engine, so agreement with it is a real cross-check.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::engine::Budget;
use super::ext::{ExtError, Extension};
use super::monomial::Monomial;
use super::poly::{accumulate, finish, SkewPoly};
use crate::finring::Elem;

pub fn pow_alpha_times_r(ext: &Arc<Extension>, alpha: Monomial, r: Elem) -> Result<SkewPoly, ExtError> {
    let budget = Budget::new(ext.step_cap(alpha.degree(), 1).saturating_mul(64));
    let terms = closed(ext, alpha, r, &budget)?;
    Ok(SkewPoly::from_terms(ext, terms))
}

fn closed(ext: &Extension, alpha: Monomial, r: Elem, b: &Budget) -> Result<Vec<(Monomial, Elem)>, ExtError> {
    if r == Elem::ZERO {
        return Ok(Vec::new());
    }
    if alpha.is_one() {
        return Ok(vec![(Monomial::ONE, r)]);
    }
    b.step()?;
    let n = ext.nvars();
    let mut words: Vec<(Elem, Vec<usize>)> = vec![(ext.sigma_alpha(&alpha, r), alpha.word())];
    let mut s = r;
    for k in (0..n).rev() {
        let ak = alpha.exp(k);
        let tail_vars: Vec<usize> = (k + 1..n)
            .flat_map(|v| std::iter::repeat(v).take(alpha.exp(v) as usize))
            .collect();
        let mut sk = s;
        for j in 1..=ak {
            // sk = σ_k^{j-1}(s)
            let c = ext.delta(k).apply(sk);
            sk = ext.sigma(k).apply(sk);
            if c == Elem::ZERO {
                continue;
            }
            let mut prefix = Monomial::ONE;
            for v in 0..k {
                prefix = prefix.with_exp(v, alpha.exp(v));
            }
            prefix = prefix.with_exp(k, ak - j);
            let mut tail = vec![k; (j - 1) as usize];
            tail.extend_from_slice(&tail_vars);
            for (g, e) in closed(ext, prefix, c, b)? {
                let mut w = g.word();
                w.extend_from_slice(&tail);
                words.push((e, w));
            }
        }
        for _ in 0..ak {
            s = ext.sigma(k).apply(s);
        }
    }
    let mut acc = BTreeMap::new();
    sort_words(ext, words, &mut acc, b)?;
    Ok(finish(acc))
}

/// Reduce coefficient-word pairs `c·w` to normal form by repeatedly replacing
/// the leftmost descent `x_j x_i` (`j > i`) with its relation.
fn sort_words(
    ext: &Extension,
    mut work: Vec<(Elem, Vec<usize>)>,
    acc: &mut BTreeMap<Monomial, Elem>,
    b: &Budget,
) -> Result<(), ExtError> {
    let ring = ext.ring();
    while let Some((c, w)) = work.pop() {
        if c == Elem::ZERO {
            continue;
        }
        let Some(p) = (0..w.len().saturating_sub(1)).find(|&p| w[p] > w[p + 1]) else {
            let mut m = Monomial::ONE;
            for &v in &w {
                m = m.with_var(v);
            }
            accumulate(ring, acc, m, c);
            continue;
        };
        b.step()?;
        let (j, i) = (w[p], w[p + 1]);
        let mut prefix = Monomial::ONE;
        for &v in &w[..p] {
            prefix = prefix.with_var(v);
        }
        let suffix = &w[p + 2..];
        let rel = ext.quad(j, i);
        let mut push = |coef: Elem, middle: &[usize]| -> Result<(), ExtError> {
            for (g, e) in closed(ext, prefix, coef, b)? {
                let mut nw = g.word();
                nw.extend_from_slice(middle);
                nw.extend_from_slice(suffix);
                work.push((ring.mul(c, e), nw));
            }
            Ok(())
        };
        push(rel.d, &[i, j])?;
        push(rel.r0, &[])?;
        for (k, &lk) in rel.lin.iter().enumerate() {
            push(lk, &[k])?;
        }
    }
    Ok(())
}
