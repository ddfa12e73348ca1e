//! Small fixed-width bit sets used for element sets and point sets.

use std::fmt;

/// A set of indices in `0..64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bits(pub u64);

impl Bits {
    pub const EMPTY: Bits = Bits(0);

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Bits {
        assert!(n <= 64, "bit set width {n} exceeds 64");
        if n == 64 {
            Bits(u64::MAX)
        } else {
            Bits((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Bits {
        Bits(1u64 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    pub fn with(self, i: usize) -> Bits {
        Bits(self.0 | 1u64 << i)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Bits) -> Bits {
        Bits(self.0 | other.0)
    }

    pub fn intersection(self, other: Bits) -> Bits {
        Bits(self.0 & other.0)
    }

    pub fn difference(self, other: Bits) -> Bits {
        Bits(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Bits) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Bits) -> bool {
        self.0 & other.0 != 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> BitsIter {
        BitsIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Bits {
        it.into_iter().fold(Bits::EMPTY, Bits::with)
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct BitsIter(u64);

impl Iterator for BitsIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

impl FromIterator<usize> for Bits {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Bits::from_indices(iter)
    }
}
