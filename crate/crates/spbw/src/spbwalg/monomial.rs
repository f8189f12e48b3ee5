use std::cmp::Ordering;

/// Largest number of variables an extension may have.
pub const MAX_VARS: usize = 8;

/// Exponent vector `α` of the standard monomial `x₁^{α₁}⋯xₙ^{αₙ}`.
/// Unused trailing slots are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        exps: [0; MAX_VARS],
    };

    pub fn from_exps(exps: &[u32]) -> Monomial {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Monomial::ONE;
        for (slot, &e) in m.exps.iter_mut().zip(exps) {
            *slot = u16::try_from(e).expect("exponent fits in u16");
        }
        m
    }

    pub fn var(i: usize) -> Monomial {
        let mut m = Monomial::ONE;
        m.exps[i] = 1;
        m
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exps(&self, n: usize) -> Vec<u32> {
        self.exps[..n].iter().map(|&e| e as u32).collect()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        *self == Monomial::ONE
    }

    /// Index of the highest variable present.
    pub fn last_var(&self) -> Option<usize> {
        self.exps.iter().rposition(|&e| e > 0)
    }

    /// Index of the lowest variable present.
    pub fn first_var(&self) -> Option<usize> {
        self.exps.iter().position(|&e| e > 0)
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.exps.iter_mut().zip(other.exps) {
            *a += b;
        }
        m
    }

    pub fn with_var(&self, i: usize) -> Monomial {
        let mut m = *self;
        m.exps[i] += 1;
        m
    }

    /// `self` with one factor of `x_i` removed. Panics if absent.
    pub fn without_var(&self, i: usize) -> Monomial {
        let mut m = *self;
        m.exps[i] = m.exps[i].checked_sub(1).expect("variable present");
        m
    }

    pub fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut m = *self;
        m.exps[i] = e as u16;
        m
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps).all(|(a, b)| *a <= b)
    }

    /// Variables in word order, e.g. `x1^2 x3` gives `[0, 0, 2]`.
    pub fn word(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.degree() as usize);
        for (i, &e) in self.exps.iter().enumerate() {
            w.extend(std::iter::repeat(i).take(e as usize));
        }
        w
    }

    pub fn format(&self, vars: &[String]) -> String {
        let parts: Vec<String> = (0..vars.len())
            .filter(|&i| self.exps[i] > 0)
            .map(|i| match self.exps[i] {
                1 => vars[i].clone(),
                e => format!("{}^{e}", vars[i]),
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl std::fmt::Debug for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = self.last_var().map_or(0, |i| i + 1);
        write!(f, "x{:?}", &self.exps[..n])
    }
}

/// Degree-lexicographic order with `x₁ < x₂ < ⋯ < xₙ`: total degree first,
/// then the exponent of the highest variable, and so on downward.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for i in (0..MAX_VARS).rev() {
                match self.exps[i].cmp(&other.exps[i]) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials in `n` variables of total degree at most `max_deg`, ascending.
pub fn monomials_up_to(n: usize, max_deg: u32) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = crate::ringmaps::multi_indices(n, max_deg)
        .iter()
        .map(|e| Monomial::from_exps(e))
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deglex_examples() {
        let x1 = Monomial::var(0);
        let x2 = Monomial::var(1);
        assert!(x1 < x2);
        assert!(x2 < x1.times(&x1));
        let x1x2 = x1.times(&x2);
        let x2sq = x2.times(&x2);
        assert!(x1x2 < x2sq);
        assert!(Monomial::ONE < x1);
    }

    #[test]
    fn order_laws_in_small_degree() {
        let mons = monomials_up_to(3, 4);
        for a in &mons {
            for b in &mons {
                // degree compatible
                if a.degree() > b.degree() {
                    assert!(a > b);
                }
                for c in monomials_up_to(3, 2) {
                    // multiplicative compatibility
                    if a >= b {
                        assert!(a.times(&c) >= b.times(&c));
                    }
                }
            }
            assert!(*a >= Monomial::ONE);
        }
        // totality and strictness of the sorted list
        for w in mons.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn words_and_counts() {
        let m = Monomial::from_exps(&[2, 0, 1]);
        assert_eq!(m.word(), vec![0, 0, 2]);
        assert_eq!(m.last_var(), Some(2));
        assert_eq!(monomials_up_to(2, 1).len(), 3);
        assert_eq!(monomials_up_to(2, 2).len(), 6);
        let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        assert_eq!(m.format(&vars), "x^2*z");
    }
}
