//! Small index sets over `0..64`, used for generator subsets and vertex
//! label sets alike.

use core::cmp::Ordering;
use core::fmt;

/// Capacity of an [`IndexSet`]; ranks and label universes are capped here.
pub const MAX_INDEX: usize = 64;

/// A set of indices in `0..64`, stored as one machine word.
///
/// Side-union and intersection computations on labelled trees reduce to
/// single word operations, and iteration order is always ascending, which
/// keeps every enumeration in the crate deterministic.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct IndexSet(u64);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    /// The set `{0, 1, ..., n-1}`.
    pub fn universe(n: usize) -> IndexSet {
        debug_assert!(n <= MAX_INDEX);
        if n >= MAX_INDEX {
            IndexSet(u64::MAX)
        } else {
            IndexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> IndexSet {
        debug_assert!(i < MAX_INDEX);
        IndexSet(1u64 << i)
    }

    pub fn from_bits(bits: u64) -> IndexSet {
        IndexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < MAX_INDEX);
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < MAX_INDEX);
        self.0 &= !(1u64 << i);
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_INDEX && self.0 & (1u64 << i) != 0
    }

    pub fn union(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 & other.0)
    }

    pub fn difference(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: IndexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Smallest element, if any.
    pub fn min(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Ascending iterator over the elements.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// Lexicographic comparison of the ascending element sequences.
    ///
    /// `{0,2} < {1}` because the sequences `[0,2]` and `[1]` compare that way;
    /// this is the order used to canonicalise splitting sides.
    pub fn lex_cmp(self, other: IndexSet) -> Ordering {
        let mut a = self.iter();
        let mut b = other.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(&y) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
            }
        }
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut set = IndexSet::EMPTY;
        for i in iter {
            set.insert(i);
        }
        set
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_cmp(*other)
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (pos, i) in self.iter().enumerate() {
            if pos > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let i = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(i)
        }
    }
}
