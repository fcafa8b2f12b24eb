//! Dense bit sets over element indices.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A set of elements of a finite universe `{0..len}`, stored as a bit vector.
///
/// Ordering compares by cardinality first and then by the sorted element
/// list, which gives families of sets a canonical, human-friendly order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    len: usize,
    words: Vec<u64>,
}

impl ElementSet {
    pub fn empty(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for x in 0..len {
            s.insert(x);
        }
        s
    }

    pub fn singleton(len: usize, x: usize) -> Self {
        let mut s = Self::empty(len);
        s.insert(x);
        s
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(len: usize, elements: I) -> Self {
        let mut s = Self::empty(len);
        for x in elements {
            s.insert(x);
        }
        s
    }

    /// Size of the ambient universe.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, x: usize) -> bool {
        assert!(x < self.len, "element {x} outside universe of size {}", self.len);
        let (w, b) = (x / 64, x % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.len && self.words[x / 64] & (1 << (x % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&x| self.contains(x))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.to_vec().cmp(&other.to_vec()))
            .then_with(|| self.len.cmp(&other.len))
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, x) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

// Serialized as the sorted element list; the universe is implied by context.
impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ElementSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let elements = Vec::<usize>::deserialize(deserializer)?;
        let len = elements.iter().max().map_or(0, |m| m + 1);
        Ok(Self::from_elements(len, elements))
    }
}
