use std::fmt;

use super::Elem;

/// Subset of a finite ring, stored as a bitset over element codes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemSet {
    card: u32,
    words: Vec<u64>,
}

impl ElemSet {
    pub fn empty(card: u32) -> Self {
        ElemSet {
            card,
            words: vec![0; (card as usize).div_ceil(64)],
        }
    }

    pub fn full(card: u32) -> Self {
        let mut s = Self::empty(card);
        for i in 0..card {
            s.insert(Elem(i));
        }
        s
    }

    pub fn from_elems(card: u32, elems: impl IntoIterator<Item = Elem>) -> Self {
        let mut s = Self::empty(card);
        for e in elems {
            s.insert(e);
        }
        s
    }

    pub fn universe(&self) -> u32 {
        self.card
    }

    pub fn insert(&mut self, e: Elem) -> bool {
        let (w, b) = (e.0 as usize / 64, e.0 % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, e: Elem) {
        self.words[e.0 as usize / 64] &= !(1 << (e.0 % 64));
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.words[e.0 as usize / 64] & (1 << (e.0 % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersect_with(&mut self, other: &ElemSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &ElemSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn complement(&self) -> ElemSet {
        let mut s = ElemSet::full(self.card);
        for (a, b) in s.words.iter_mut().zip(&self.words) {
            *a &= !b;
        }
        s
    }

    /// Elements in increasing code order.
    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros();
                bits &= bits - 1;
                Some(Elem(wi as u32 * 64 + b))
            })
        })
    }

    pub fn first(&self) -> Option<Elem> {
        self.iter().next()
    }

    pub fn to_vec(&self) -> Vec<Elem> {
        self.iter().collect()
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|e| e.0)).finish()
    }
}

/// Serialized as the ascending list of element codes.
impl serde::Serialize for ElemSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|e| e.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = ElemSet::from_elems(130, [Elem(1), Elem(64), Elem(129)]);
        let b = ElemSet::from_elems(130, [Elem(1), Elem(2)]);
        assert_eq!(a.len(), 3);
        assert_eq!(a.intersection(&b).to_vec(), vec![Elem(1)]);
        assert_eq!(a.union(&b).len(), 4);
        assert!(!a.is_subset(&b));
        assert!(a.intersection(&b).is_subset(&b));
        assert_eq!(a.complement().len(), 127);
        assert_eq!(a.to_vec(), vec![Elem(1), Elem(64), Elem(129)]);
    }
}
