use serde::Serialize;

/// Constructive description of a finite ring.
///
/// Polynomial moduli are coefficient codes in the base ring, constant term
/// first, and must be monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RingSpec {
    Zmod(u64),
    /// Field of `order` elements. For prime powers the modulus is over
    /// `Zmod(p)`; when absent the least irreducible monic polynomial in code
    /// order is used, with variable `a`.
    Gf {
        order: u64,
        var: Option<String>,
        modulus: Option<Vec<u32>>,
    },
    Quotient {
        base: Box<RingSpec>,
        var: String,
        modulus: Vec<u32>,
    },
    Triangular {
        base: Box<RingSpec>,
        size: usize,
    },
    FullMatrix {
        base: Box<RingSpec>,
        size: usize,
    },
    /// `T(R, R)`, the pairs `(r, m)` multiplied as `[r, m; 0, r]`.
    TrivialExt {
        base: Box<RingSpec>,
    },
    Product(Vec<RingSpec>),
}

impl RingSpec {
    pub fn quotient(base: RingSpec, var: &str, modulus: Vec<u32>) -> Self {
        RingSpec::Quotient {
            base: Box::new(base),
            var: var.to_string(),
            modulus,
        }
    }

    pub fn gf(order: u64) -> Self {
        RingSpec::Gf {
            order,
            var: None,
            modulus: None,
        }
    }

    pub fn trivial(base: RingSpec) -> Self {
        RingSpec::TrivialExt {
            base: Box::new(base),
        }
    }

    pub fn triangular(base: RingSpec, size: usize) -> Self {
        RingSpec::Triangular {
            base: Box::new(base),
            size,
        }
    }

    pub fn matrices(base: RingSpec, size: usize) -> Self {
        RingSpec::FullMatrix {
            base: Box::new(base),
            size,
        }
    }

    /// Number of elements, or `None` on overflow.
    pub fn cardinality(&self) -> Option<u128> {
        match self {
            RingSpec::Zmod(n) => Some(*n as u128),
            RingSpec::Gf { order, .. } => Some(*order as u128),
            RingSpec::Quotient { base, modulus, .. } => {
                let deg = modulus.len().checked_sub(1)?;
                checked_pow(base.cardinality()?, deg)
            }
            RingSpec::Triangular { base, size } => {
                checked_pow(base.cardinality()?, size * (size + 1) / 2)
            }
            RingSpec::FullMatrix { base, size } => checked_pow(base.cardinality()?, size * size),
            RingSpec::TrivialExt { base } => checked_pow(base.cardinality()?, 2),
            RingSpec::Product(parts) => parts
                .iter()
                .try_fold(1u128, |acc, p| acc.checked_mul(p.cardinality()?)),
        }
    }
}

fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinality_formulas() {
        let f4z2 = RingSpec::quotient(RingSpec::gf(4), "z", vec![0, 0, 1]);
        assert_eq!(f4z2.cardinality(), Some(16));
        assert_eq!(RingSpec::trivial(RingSpec::Zmod(4)).cardinality(), Some(16));
        assert_eq!(RingSpec::triangular(RingSpec::Zmod(2), 3).cardinality(), Some(64));
        assert_eq!(RingSpec::matrices(RingSpec::Zmod(2), 2).cardinality(), Some(16));
        assert_eq!(
            RingSpec::Product(vec![RingSpec::Zmod(2), RingSpec::Zmod(3)]).cardinality(),
            Some(6)
        );
        assert_eq!(RingSpec::matrices(RingSpec::Zmod(1 << 40), 4).cardinality(), None);
    }
}
