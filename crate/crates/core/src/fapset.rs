use std::fmt;

use itertools::Itertools;

/// Largest F-AP population a [`FapSet`] can hold.
pub const MAX_FAPS: usize = 64;

/// A set of F-AP indices drawn from `1..=64`, stored as a bitmask.
///
/// Member `k` occupies bit `k - 1`. Ordering on the raw mask is only used for
/// map keys; [`FapSet::cmp_lex`] gives the lexicographic order on the sorted
/// member lists that delivery iterates in.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct FapSet(u64);

impl FapSet {
    pub const EMPTY: FapSet = FapSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        FapSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{1, ..., k}`.
    pub fn full(k: usize) -> Self {
        assert!(k <= MAX_FAPS, "at most {MAX_FAPS} F-APs");
        if k == MAX_FAPS {
            FapSet(u64::MAX)
        } else {
            FapSet((1u64 << k) - 1)
        }
    }

    pub fn singleton(k: usize) -> Self {
        Self::EMPTY.with(k)
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(members: I) -> Self {
        members.into_iter().fold(Self::EMPTY, FapSet::with)
    }

    pub fn with(self, k: usize) -> Self {
        assert!((1..=MAX_FAPS).contains(&k), "F-AP index {k} out of 1..={MAX_FAPS}");
        FapSet(self.0 | (1u64 << (k - 1)))
    }

    pub fn without(self, k: usize) -> Self {
        if (1..=MAX_FAPS).contains(&k) {
            FapSet(self.0 & !(1u64 << (k - 1)))
        } else {
            self
        }
    }

    pub fn contains(self, k: usize) -> bool {
        (1..=MAX_FAPS).contains(&k) && self.0 & (1u64 << (k - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: FapSet) -> FapSet {
        FapSet(self.0 | other.0)
    }

    pub fn intersection(self, other: FapSet) -> FapSet {
        FapSet(self.0 & other.0)
    }

    pub fn difference(self, other: FapSet) -> FapSet {
        FapSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: FapSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: FapSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Largest member.
    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros() as usize)
    }

    /// Members in ascending order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    /// All `size`-element subsets in lexicographic order of their sorted members.
    pub fn subsets_of_size(self, size: usize) -> impl Iterator<Item = FapSet> {
        self.iter()
            .combinations(size)
            .map(FapSet::from_members)
    }

    /// Lexicographic comparison of the sorted member sequences.
    pub fn cmp_lex(self, other: FapSet) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl FromIterator<usize> for FapSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        FapSet::from_members(iter)
    }
}

impl IntoIterator for FapSet {
    type Item = usize;
    type IntoIter = Members;

    fn into_iter(self) -> Members {
        self.iter()
    }
}

/// Ascending member iterator of a [`FapSet`].
#[derive(Clone)]
pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let k = self.0.trailing_zeros() as usize + 1;
        self.0 &= self.0 - 1;
        Some(k)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

/// `{1,2,3}`; the empty set prints as `{}`.
impl fmt::Display for FapSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.iter().join(","))
    }
}

impl fmt::Debug for FapSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_membership() {
        let s = FapSet::from_members([1, 3, 4]);
        assert!(s.contains(1) && s.contains(3) && s.contains(4));
        assert!(!s.contains(2) && !s.contains(0) && !s.contains(65));
        assert_eq!(s.len(), 3);
        assert_eq!(s.first(), Some(1));
        assert_eq!(s.last(), Some(4));
        assert_eq!(s.to_string(), "{1,3,4}");
        assert_eq!(FapSet::EMPTY.to_string(), "{}");
        assert_eq!(FapSet::full(64).len(), 64);
        assert_eq!(FapSet::full(64).last(), Some(64));
    }

    #[test]
    fn subsets_come_in_lexicographic_order() {
        let subs: Vec<String> = FapSet::from_members([2, 3, 4])
            .subsets_of_size(2)
            .map(|s| s.to_string())
            .collect();
        assert_eq!(subs, ["{2,3}", "{2,4}", "{3,4}"]);
        assert_eq!(FapSet::full(4).subsets_of_size(0).collect::<Vec<_>>(), [FapSet::EMPTY]);
        assert_eq!(FapSet::full(2).subsets_of_size(3).count(), 0);
    }

    proptest! {
        #[test]
        fn iter_roundtrips_and_is_sorted(bits in any::<u64>()) {
            let s = FapSet::from_bits(bits);
            let members: Vec<usize> = s.iter().collect();
            prop_assert!(members.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(FapSet::from_members(members.iter().copied()), s);
            prop_assert_eq!(members.len(), s.len());
        }

        #[test]
        fn set_algebra(a in any::<u64>(), b in any::<u64>()) {
            let (x, y) = (FapSet::from_bits(a), FapSet::from_bits(b));
            prop_assert_eq!(x.union(y).len() + x.intersection(y).len(), x.len() + y.len());
            prop_assert!(x.difference(y).is_disjoint(y));
            prop_assert!(x.intersection(y).is_subset(x));
        }
    }
}
