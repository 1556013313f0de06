//! Fixed-width vertex sets over a digraph with at most [`MAX_VERTICES`] vertices.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest vertex count any [`Digraph`](crate::Digraph) may have.
pub const MAX_VERTICES: usize = 64;

/// A set of vertex ids in `0..64`, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        debug_assert!(v < MAX_VERTICES);
        VertexSet(1u64 << v)
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in increasing order.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self` with exactly `size` members, in increasing order of bitmask.
    pub fn subsets_of_size(self, size: usize) -> impl Iterator<Item = VertexSet> {
        let members = self.to_vec();
        let limit = 1u128 << members.len();
        // Gosper's hack over positions in `members`
        let mut cur = (size <= members.len()).then(|| (1u128 << size) - 1);
        std::iter::from_fn(move || {
            let c = cur.filter(|&c| c < limit)?;
            cur = (c != 0).then(|| {
                let lowest = c & c.wrapping_neg();
                let ripple = c + lowest;
                (((ripple ^ c) >> 2) / lowest) | ripple
            });
            Some(
                members
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| c >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect(),
            )
        })
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let list = Vec::<usize>::deserialize(deserializer)?;
        let mut s = VertexSet::EMPTY;
        for v in list {
            if v >= MAX_VERTICES {
                return Err(D::Error::custom(format!("vertex {v} exceeds the {MAX_VERTICES}-vertex limit")));
            }
            if s.contains(v) {
                return Err(D::Error::custom(format!("vertex {v} listed twice")));
            }
            s.insert(v);
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a: VertexSet = [0, 2, 5].into_iter().collect();
        let b: VertexSet = [2, 3].into_iter().collect();
        assert_eq!(a.union(b).to_vec(), vec![0, 2, 3, 5]);
        assert_eq!(a.intersection(b).to_vec(), vec![2]);
        assert_eq!(a.difference(b).to_vec(), vec![0, 5]);
        assert!(VertexSet::singleton(2).is_subset(a));
        assert_eq!(VertexSet::full(3).len(), 3);
        assert_eq!(VertexSet::full(64).len(), 64);
        assert_eq!(a.to_string(), "{0,2,5}");
    }

    #[test]
    fn subsets_of_size_enumerates_binomial() {
        let s = VertexSet::full(5).without(1);
        let subs: Vec<_> = s.subsets_of_size(2).collect();
        assert_eq!(subs.len(), 6);
        assert!(subs.windows(2).all(|w| w[0].bits() < w[1].bits()));
        assert!(subs.iter().all(|z| z.len() == 2 && z.is_subset(s)));
        assert_eq!(s.subsets_of_size(0).count(), 1);
        assert_eq!(s.subsets_of_size(4).count(), 1);
        assert_eq!(s.subsets_of_size(5).count(), 0);
    }

    #[test]
    fn json_is_sorted_list() {
        let a: VertexSet = [3, 1].into_iter().collect();
        assert_eq!(serde_json::to_string(&a).unwrap(), "[1,3]");
        let back: VertexSet = serde_json::from_str("[3,1]").unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<VertexSet>("[1,1]").is_err());
        assert!(serde_json::from_str::<VertexSet>("[64]").is_err());
    }
}
