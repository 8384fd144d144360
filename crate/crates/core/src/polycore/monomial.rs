use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::PolyError;

type Exponents = SmallVec<[u32; 12]>;

/// A power product `x_1^{e_1} ... x_d^{e_d}` with cached total degree.
///
/// Exponent arithmetic is checked; overflow panics instead of wrapping.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Exponents,
    degree: u64,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: smallvec::smallvec![0; nvars],
            degree: 0,
        }
    }

    pub fn var(nvars: usize, index: usize, exp: u32) -> Self {
        let mut m = Self::one(nvars);
        m.exps[index] = exp;
        m.degree = exp as u64;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial {
            degree: exps.iter().map(|&e| e as u64).sum(),
            exps: exps.iter().copied().collect(),
        }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// Degree in the variables `range`.
    pub fn partial_degree(&self, range: std::ops::Range<usize>) -> u64 {
        self.exps[range].iter().map(|&e| e as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
            .collect();
        Monomial {
            exps,
            degree: self
                .degree
                .checked_add(other.degree)
                .expect("degree overflow"),
        }
    }

    pub fn pow(&self, k: u32) -> Monomial {
        let exps = self
            .exps
            .iter()
            .map(|a| a.checked_mul(k).expect("exponent overflow"))
            .collect();
        Monomial {
            exps,
            degree: self
                .degree
                .checked_mul(k as u64)
                .expect("degree overflow"),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
            degree: self.degree - other.degree,
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: Exponents = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| *a.max(b))
            .collect();
        Monomial {
            degree: exps.iter().map(|&e| e as u64).sum(),
            exps,
        }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Index of the only variable present, if this is a pure power.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    pub(crate) fn set_exponent(&mut self, index: usize, exp: u32) {
        self.degree = self.degree - self.exps[index] as u64 + exp as u64;
        self.exps[index] = exp;
    }

    /// Re-indexes variables: old variable `i` becomes `mapping[i]` in a ring with `nvars` variables.
    pub fn embed(&self, nvars: usize, mapping: &[usize]) -> Monomial {
        let mut m = Monomial::one(nvars);
        for (i, &e) in self.exps.iter().enumerate() {
            m.exps[mapping[i]] += e;
        }
        m.degree = self.degree;
        m
    }
}

/// Monomial orders. `BlockElim(k)` compares the first `k` variables by grevlex and
/// breaks ties by grevlex on the remaining ones, so it eliminates the first block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    BlockElim(usize),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::Grevlex => grevlex(&a.exps, a.degree, &b.exps, b.degree),
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::BlockElim(k) => {
                let k = k.min(a.exps.len());
                let (a1, a2) = a.exps.split_at(k);
                let (b1, b2) = b.exps.split_at(k);
                let da1: u64 = a1.iter().map(|&e| e as u64).sum();
                let db1: u64 = b1.iter().map(|&e| e as u64).sum();
                grevlex(a1, da1, b1, db1)
                    .then_with(|| grevlex(a2, a.degree - da1, b2, b.degree - db1))
            }
        }
    }
}

fn grevlex(a: &[u32], da: u64, b: &[u32], db: u64) -> Ordering {
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().rev().zip(b.iter().rev()) {
            if x != y {
                // smaller exponent in the last differing variable wins
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// Compares two monomials, rejecting length mismatches.
pub fn compare_monomials(
    a: &Monomial,
    b: &Monomial,
    order: MonomialOrder,
) -> Result<Ordering, PolyError> {
    if a.nvars() != b.nvars() {
        return Err(PolyError::LengthMismatch(a.nvars(), b.nvars()));
    }
    Ok(order.cmp(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn grevlex_examples() {
        let o = MonomialOrder::Grevlex;
        assert_eq!(o.cmp(&m(&[2, 0, 0]), &m(&[1, 1, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 1, 0]), &m(&[1, 0, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 2, 0]), &m(&[1, 0, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 0, 3]), &m(&[1, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn lex_ignores_degree() {
        let o = MonomialOrder::Lex;
        assert_eq!(o.cmp(&m(&[0, 10]), &m(&[1, 0])), Ordering::Less);
    }

    #[test]
    fn reflexive_and_length_checked() {
        for o in [MonomialOrder::Grevlex, MonomialOrder::Lex, MonomialOrder::BlockElim(1)] {
            assert_eq!(compare_monomials(&m(&[1, 2]), &m(&[1, 2]), o).unwrap(), Ordering::Equal);
        }
        assert!(compare_monomials(&m(&[1]), &m(&[1, 2]), MonomialOrder::Lex).is_err());
    }

    #[test]
    fn block_order_eliminates() {
        let o = MonomialOrder::BlockElim(1);
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 0, 2]), &m(&[1, 1, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[1, 1, 0])), Ordering::Less);
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn exponent_overflow_is_fatal() {
        let a = m(&[u32::MAX]);
        let _ = a.mul(&m(&[1]));
    }

    fn orders() -> impl Strategy<Value = MonomialOrder> {
        prop_oneof![
            Just(MonomialOrder::Grevlex),
            Just(MonomialOrder::Lex),
            (0usize..4).prop_map(MonomialOrder::BlockElim)
        ]
    }

    proptest! {
        #[test]
        fn multiplicative_and_divisibility_compatible(
            o in orders(),
            a in proptest::collection::vec(0u32..5, 4),
            b in proptest::collection::vec(0u32..5, 4),
            c in proptest::collection::vec(0u32..5, 4),
        ) {
            let (a, b, c) = (m(&a), m(&b), m(&c));
            prop_assert_eq!(o.cmp(&a, &b), o.cmp(&a.mul(&c), &b.mul(&c)));
            prop_assert_eq!(o.cmp(&a, &b), o.cmp(&b, &a).reverse());
            if !c.is_one() {
                prop_assert_eq!(o.cmp(&a, &a.mul(&c)), Ordering::Less);
            }
        }

        #[test]
        fn sorted_samples_have_no_descending_cycle(
            o in orders(),
            sample in proptest::collection::vec(proptest::collection::vec(0u32..4, 3), 1..30),
        ) {
            let mut mons: Vec<Monomial> = sample.iter().map(|e| m(e)).collect();
            mons.sort_by(|x, y| o.cmp(x, y));
            for w in mons.windows(2) {
                prop_assert_ne!(o.cmp(&w[0], &w[1]), Ordering::Greater);
            }
            // the minimum is not beaten by anything, in particular not by 1 ≠ m
            let one = Monomial::one(3);
            prop_assert_ne!(o.cmp(&mons[0], &one), Ordering::Less);
        }

        #[test]
        fn transitive(
            o in orders(),
            a in proptest::collection::vec(0u32..4, 3),
            b in proptest::collection::vec(0u32..4, 3),
            c in proptest::collection::vec(0u32..4, 3),
        ) {
            let (a, b, c) = (m(&a), m(&b), m(&c));
            if o.cmp(&a, &b) != Ordering::Greater && o.cmp(&b, &c) != Ordering::Greater {
                prop_assert_ne!(o.cmp(&a, &c), Ordering::Greater);
            }
        }
    }
}
