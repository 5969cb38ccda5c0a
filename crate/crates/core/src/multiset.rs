//! Finite multisets with the usual pointwise operations.
//!
//! Entries with count zero are never stored, so two multisets with the same
//! non-zero entries are equal no matter which domain they were built over.

use alloc::collections::btree_map::{self, BTreeMap};
use alloc::collections::BTreeSet;
use core::fmt;

/// A count exceeded `u32::MAX`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOverflow;

impl fmt::Display for CountOverflow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("multiset count overflow")
    }
}

impl core::error::Error for CountOverflow {}

/// How [`Multiset::combine`] merges two multisets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    /// `A(x) + B(x)`
    Sum,
    /// `max(A(x), B(x))`
    Union,
    /// `min(A(x), B(x))`
    Intersection,
}

/// Finite multiset over `K`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset<K: Ord> {
    entries: BTreeMap<K, u32>,
}

impl<K: Ord> Default for Multiset<K> {
    fn default() -> Self {
        Self { entries: BTreeMap::new() }
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for Multiset<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

impl<K: Ord + Clone> Multiset<K> {
    pub fn new() -> Self {
        Self::default()
    }

    /// The multiset `{x}`.
    pub fn singleton(x: K) -> Self {
        let mut m = Self::new();
        m.entries.insert(x, 1);
        m
    }

    /// Sets the count of `x`; a count of zero removes it.
    pub fn set(&mut self, x: K, count: u32) {
        if count == 0 {
            self.entries.remove(&x);
        } else {
            self.entries.insert(x, count);
        }
    }

    /// Adds `count` copies of `x`.
    pub fn insert(&mut self, x: K, count: u32) -> Result<(), CountOverflow> {
        if count == 0 {
            return Ok(());
        }
        let slot = self.entries.entry(x).or_insert(0);
        *slot = slot.checked_add(count).ok_or(CountOverflow)?;
        Ok(())
    }

    pub fn count(&self, x: &K) -> u32 {
        self.entries.get(x).copied().unwrap_or(0)
    }

    pub fn contains(&self, x: &K) -> bool {
        self.entries.contains_key(x)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `|A|`, the sum of all counts.
    pub fn cardinality(&self) -> u64 {
        self.entries.values().map(|&c| u64::from(c)).sum()
    }

    /// Elements with their (positive) counts, in ascending element order.
    pub fn iter(&self) -> impl Iterator<Item = (&K, u32)> + '_ {
        self.entries.iter().map(|(k, &c)| (k, c))
    }

    /// The support `{x | A(x) > 0}`.
    pub fn support(&self) -> BTreeSet<K> {
        self.entries.keys().cloned().collect()
    }

    pub fn combine(&self, other: &Self, mode: Combine) -> Result<Self, CountOverflow> {
        match mode {
            Combine::Sum => self.sum(other),
            Combine::Union => Ok(self.union(other)),
            Combine::Intersection => Ok(self.intersection(other)),
        }
    }

    pub fn sum(&self, other: &Self) -> Result<Self, CountOverflow> {
        let mut out = self.clone();
        for (k, c) in other.iter() {
            out.insert(k.clone(), c)?;
        }
        Ok(out)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.iter() {
            let slot = out.entries.entry(k.clone()).or_insert(0);
            *slot = (*slot).max(c);
        }
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let entries = self
            .iter()
            .filter_map(|(k, c)| {
                let m = c.min(other.count(k));
                (m > 0).then(|| (k.clone(), m))
            })
            .collect();
        Self { entries }
    }

    /// Pointwise truncated subtraction `max(A(x) - B(x), 0)`.
    pub fn monus(&self, other: &Self) -> Self {
        let entries = self
            .iter()
            .filter_map(|(k, c)| {
                let d = c.saturating_sub(other.count(k));
                (d > 0).then(|| (k.clone(), d))
            })
            .collect();
        Self { entries }
    }

    /// `k·A`.
    pub fn scale(&self, k: u32) -> Result<Self, CountOverflow> {
        if k == 0 {
            return Ok(Self::new());
        }
        let mut entries = BTreeMap::new();
        for (x, c) in self.iter() {
            entries.insert(x.clone(), c.checked_mul(k).ok_or(CountOverflow)?);
        }
        Ok(Self { entries })
    }

    /// `A↾Y`.
    pub fn restrict(&self, domain: &BTreeSet<K>) -> Self {
        let entries = self
            .iter()
            .filter(|(k, _)| domain.contains(*k))
            .map(|(k, c)| (k.clone(), c))
            .collect();
        Self { entries }
    }

    /// `(k·A)↾Y`.
    pub fn scale_restrict(&self, k: u32, domain: &BTreeSet<K>) -> Result<Self, CountOverflow> {
        self.restrict(domain).scale(k)
    }

    /// `A ⊆ B`: every count of `self` is at most the corresponding count of `other`.
    pub fn leq(&self, other: &Self) -> bool {
        self.iter().all(|(k, c)| c <= other.count(k))
    }

    /// Applies `f` to every element, summing counts of elements that collide.
    pub fn map<J: Ord + Clone>(&self, mut f: impl FnMut(&K) -> J) -> Result<Multiset<J>, CountOverflow> {
        let mut out = Multiset::new();
        for (k, c) in self.iter() {
            out.insert(f(k), c)?;
        }
        Ok(out)
    }
}

impl<K: Ord + Clone> FromIterator<K> for Multiset<K> {
    /// Counts occurrences. Panics only if a count overflows `u32`.
    fn from_iter<I: IntoIterator<Item = K>>(iter: I) -> Self {
        let mut m = Self::new();
        for x in iter {
            m.insert(x, 1).expect("multiset count overflow");
        }
        m
    }
}

impl<K: Ord + Clone> FromIterator<(K, u32)> for Multiset<K> {
    fn from_iter<I: IntoIterator<Item = (K, u32)>>(iter: I) -> Self {
        let mut m = Self::new();
        for (x, c) in iter {
            m.insert(x, c).expect("multiset count overflow");
        }
        m
    }
}

impl<'a, K: Ord> IntoIterator for &'a Multiset<K> {
    type Item = (&'a K, &'a u32);
    type IntoIter = btree_map::Iter<'a, K, u32>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn ms(pairs: &[(char, u32)]) -> Multiset<char> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn combine_modes() {
        let sum = ms(&[('x', 2)]).combine(&ms(&[('x', 1), ('y', 1)]), Combine::Sum).unwrap();
        assert_eq!(sum, ms(&[('x', 3), ('y', 1)]));

        let a = ms(&[('x', 2), ('z', 5)]);
        assert_eq!(Multiset::new().combine(&a, Combine::Union).unwrap(), a);

        let inter = ms(&[('x', 2), ('y', 1)])
            .combine(&ms(&[('y', 1), ('z', 1)]), Combine::Intersection)
            .unwrap();
        assert_eq!(inter, ms(&[('y', 1)]));
    }

    #[test]
    fn monus_truncates() {
        let a = ms(&[('x', 2), ('y', 1)]);
        assert_eq!(a.monus(&ms(&[('x', 1), ('y', 1), ('z', 1)])), ms(&[('x', 1)]));
        assert_eq!(a.monus(&Multiset::new()), a);
        assert_eq!(Multiset::new().monus(&a), Multiset::new());
    }

    #[test]
    fn scale_and_restrict() {
        let a = ms(&[('x', 1), ('y', 2)]);
        let xy: BTreeSet<char> = ['x', 'y'].into_iter().collect();
        let y: BTreeSet<char> = ['y'].into_iter().collect();
        assert_eq!(a.scale_restrict(2, &xy).unwrap(), ms(&[('x', 2), ('y', 4)]));
        assert_eq!(a.scale_restrict(1, &y).unwrap(), ms(&[('y', 2)]));
        assert!(a.scale_restrict(0, &xy).unwrap().is_empty());
    }

    #[test]
    fn leq_pointwise() {
        assert!(ms(&[('x', 1)]).leq(&ms(&[('x', 2), ('y', 1)])));
        assert!(!ms(&[('x', 3)]).leq(&ms(&[('x', 2)])));
        assert!(Multiset::new().leq(&ms(&[('q', 4)])));
    }

    #[test]
    fn zero_counts_are_absent() {
        let mut a = ms(&[('x', 1)]);
        a.set('x', 0);
        a.insert('y', 0).unwrap();
        assert!(a.is_empty());
        assert_eq!(a, Multiset::new());
        // built over different "domains", same entries
        let mut b = Multiset::new();
        b.set('x', 3);
        b.set('w', 0);
        assert_eq!(b, ms(&[('x', 3)]));
    }

    #[test]
    fn overflow_is_an_error() {
        let a = ms(&[('x', u32::MAX)]);
        assert_eq!(a.sum(&ms(&[('x', 1)])), Err(CountOverflow));
        assert_eq!(a.scale(2), Err(CountOverflow));
        assert_eq!(a.cardinality(), u64::from(u32::MAX));
    }

    fn arb_multiset() -> impl Strategy<Value = Multiset<u8>> {
        proptest::collection::vec((0u8..6, 0u32..5), 0..8)
            .prop_map(|v| v.into_iter().collect::<Multiset<u8>>())
    }

    proptest! {
        #[test]
        fn commutativity(a in arb_multiset(), b in arb_multiset()) {
            for mode in [Combine::Sum, Combine::Union, Combine::Intersection] {
                prop_assert_eq!(a.combine(&b, mode).unwrap(), b.combine(&a, mode).unwrap());
            }
        }

        #[test]
        fn sum_then_monus_cancels(a in arb_multiset(), b in arb_multiset()) {
            prop_assert_eq!(a.sum(&b).unwrap().monus(&b), a);
        }

        #[test]
        fn leq_iff_difference_restores(a in arb_multiset(), b in arb_multiset()) {
            let restored = a.sum(&b.monus(&a)).unwrap();
            prop_assert_eq!(a.leq(&b), restored == b);
        }

        #[test]
        fn cardinality_is_sum_of_counts(v in proptest::collection::vec(0u8..5, 0..20)) {
            let m: Multiset<u8> = v.iter().copied().collect();
            prop_assert_eq!(m.cardinality(), v.len() as u64);
            prop_assert!(m.iter().all(|(_, c)| c > 0));
        }
    }

    #[test]
    fn map_merges_collisions() {
        let a = ms(&[('a', 1), ('b', 2)]);
        let m = a.map(|_| 0u8).unwrap();
        assert_eq!(m.iter().collect::<vec::Vec<_>>(), vec![(&0u8, 3)]);
    }
}
