//! Decidable set descriptors.
//!
//! The base class is ultimately-periodic subsets of ℕ: an explicit prefix
//! bitmap followed by a repeating period bitmap. These are closed under
//! complement, union and intersection, and cover every concrete set the
//! kernel needs ({2}, ∅, the evens, finite stage sets).
//!
//! Oracles for boxed provability may additionally be tuples of sets (coding
//! `⟨i, x⟩ ∈ A ⇔ x ∈ A_i`) or the pair-coding of a well-order.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::ordinal::WellOrder;
use crate::term::{pair_u64, unpair_code};

/// Ultimately periodic set: `n ∈ S` looks up `prefix[n]` for `n < prefix.len()`,
/// otherwise `period[(n - prefix.len()) mod period.len()]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetDescriptor {
    prefix: Vec<bool>,
    period: Vec<bool>,
}

impl SetDescriptor {
    pub fn new(prefix: Vec<bool>, period: Vec<bool>) -> SetDescriptor {
        let period = if period.is_empty() { vec![false] } else { period };
        SetDescriptor { prefix, period }
    }

    pub fn empty() -> SetDescriptor {
        SetDescriptor::new(vec![], vec![false])
    }

    pub fn full() -> SetDescriptor {
        SetDescriptor::new(vec![], vec![true])
    }

    pub fn evens() -> SetDescriptor {
        SetDescriptor::new(vec![], vec![true, false])
    }

    pub fn singleton(n: u64) -> SetDescriptor {
        Self::from_finite(&[n])
    }

    pub fn from_finite(elements: &[u64]) -> SetDescriptor {
        let max = elements.iter().copied().max().map(|m| m + 1).unwrap_or(0);
        let mut prefix = vec![false; max as usize];
        for &e in elements {
            prefix[e as usize] = true;
        }
        SetDescriptor::new(prefix, vec![false])
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    pub fn contains(&self, n: &BigUint) -> bool {
        if let Some(small) = n.to_u64() {
            if (small as usize) < self.prefix.len() {
                return self.prefix[small as usize];
            }
        }
        let p = BigUint::from(self.prefix.len());
        let idx = (n - &p).mod_floor(&BigUint::from(self.period.len()));
        self.period[idx.to_usize().expect("period index fits usize")]
    }

    pub fn contains_u64(&self, n: u64) -> bool {
        self.contains(&BigUint::from(n))
    }

    pub fn complement(&self) -> SetDescriptor {
        SetDescriptor {
            prefix: self.prefix.iter().map(|b| !b).collect(),
            period: self.period.iter().map(|b| !b).collect(),
        }
    }

    fn zip_with(&self, other: &SetDescriptor, op: impl Fn(bool, bool) -> bool) -> SetDescriptor {
        let prefix_len = self.prefix.len().max(other.prefix.len());
        let period_len = lcm(self.period.len(), other.period.len());
        let prefix = (0..prefix_len as u64)
            .map(|n| op(self.contains_u64(n), other.contains_u64(n)))
            .collect();
        let period = (0..period_len as u64)
            .map(|i| {
                let n = prefix_len as u64 + i;
                op(self.contains_u64(n), other.contains_u64(n))
            })
            .collect();
        SetDescriptor::new(prefix, period)
    }

    pub fn union(&self, other: &SetDescriptor) -> SetDescriptor {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &SetDescriptor) -> SetDescriptor {
        self.zip_with(other, |a, b| a && b)
    }

    /// Canonical form: minimal period, prefix trimmed into the period phase.
    pub fn normalize(&self) -> SetDescriptor {
        // Minimal period: smallest divisor of period.len() that tiles it.
        let plen = self.period.len();
        let mut min_period = self.period.clone();
        for d in 1..=plen {
            if plen % d == 0 {
                let candidate = &self.period[..d];
                if self.period.chunks(d).all(|c| c == candidate) {
                    min_period = candidate.to_vec();
                    break;
                }
            }
        }
        // Absorb prefix tail bits into the period. Popping the last prefix bit
        // shifts every later phase by one, so it is sound exactly when the bit
        // matches the period's last entry, rotating the period right with it.
        let mut prefix = self.prefix.clone();
        let mut period = min_period;
        while let Some(&last) = prefix.last() {
            if period[period.len() - 1] == last {
                prefix.pop();
                period.rotate_right(1);
            } else {
                break;
            }
        }
        SetDescriptor::new(prefix, period)
    }

    /// Extensional equality (independent of the prefix/period split).
    pub fn eq_semantic(&self, other: &SetDescriptor) -> bool {
        let bound = self.prefix.len().max(other.prefix.len())
            + lcm(self.period.len(), other.period.len());
        (0..bound as u64).all(|n| self.contains_u64(n) == other.contains_u64(n))
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Decidable oracle descriptor: a plain set, a tuple of sets coded by
/// `⟨i, x⟩`, or a well-order coded as `{⟨0, x⟩ : x ∈ |Λ|} ∪ {⟨1, ⟨x,y⟩⟩ : x <_Λ y}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleSet {
    Plain(SetDescriptor),
    Tuple(Vec<OracleSet>),
    OrderCode(WellOrder),
}

impl OracleSet {
    pub fn contains(&self, n: &BigUint) -> bool {
        match self {
            OracleSet::Plain(d) => d.contains(n),
            OracleSet::Tuple(components) => {
                let (i, x) = unpair_code(n);
                match i.to_usize() {
                    Some(idx) if idx < components.len() => components[idx].contains(&x),
                    _ => false,
                }
            }
            OracleSet::OrderCode(order) => {
                let (tag, payload) = unpair_code(n);
                match tag.to_u64() {
                    Some(0) => payload
                        .to_u64()
                        .map(|e| order.contains(e))
                        .unwrap_or(false),
                    Some(1) => {
                        let (a, b) = unpair_code(&payload);
                        match (a.to_u64(), b.to_u64()) {
                            (Some(a), Some(b)) => order.less(a, b),
                            _ => false,
                        }
                    }
                    _ => false,
                }
            }
        }
    }

    pub fn contains_u64(&self, n: u64) -> bool {
        self.contains(&BigUint::from(n))
    }

    /// Code of the carrier-membership atom `x ∈ |Λ|` for an order-coded set.
    pub fn order_member_code(element: u64) -> BigUint {
        crate::term::pair_code(&BigUint::from(0u32), &BigUint::from(element))
    }

    /// Code of the order atom `a <_Λ b` for an order-coded set.
    pub fn order_less_code(a: u64, b: u64) -> BigUint {
        crate::term::pair_code(&BigUint::from(1u32), &pair_u64(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evens_and_complement() {
        let e = SetDescriptor::evens();
        assert!(e.contains_u64(0));
        assert!(!e.contains_u64(1));
        assert!(e.contains_u64(100));
        let odds = e.complement();
        assert!(odds.contains_u64(7));
        assert!(!odds.contains_u64(8));
    }

    #[test]
    fn boolean_ops_agree_pointwise() {
        let a = SetDescriptor::new(vec![true, false, true], vec![true, false, false]);
        let b = SetDescriptor::evens();
        let u = a.union(&b);
        let i = a.intersection(&b);
        for n in 0..60 {
            assert_eq!(u.contains_u64(n), a.contains_u64(n) || b.contains_u64(n));
            assert_eq!(i.contains_u64(n), a.contains_u64(n) && b.contains_u64(n));
        }
    }

    #[test]
    fn semantic_equality_ignores_the_split() {
        // The evens, written with a redundant prefix and a doubled period.
        let a = SetDescriptor::evens();
        let b = SetDescriptor::new(vec![true, false, true, false], vec![true, false, true, false]);
        assert!(a.eq_semantic(&b));
        assert!(!a.eq_semantic(&SetDescriptor::singleton(2)));
        assert_eq!(b.normalize(), a.normalize());
    }

    #[test]
    fn tuple_oracle_decodes_components() {
        let t = OracleSet::Tuple(vec![
            OracleSet::Plain(SetDescriptor::singleton(2)),
            OracleSet::Plain(SetDescriptor::evens()),
        ]);
        assert!(t.contains(&pair_u64(0, 2)));
        assert!(!t.contains(&pair_u64(0, 3)));
        assert!(t.contains(&pair_u64(1, 4)));
        assert!(!t.contains(&pair_u64(1, 5)));
        assert!(!t.contains(&pair_u64(2, 0)));
    }
}
