//! Equivalence relations on `{0..m}`: a mutable union-find used while
//! generating, and an immutable [`Partition`] handed out as the result.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Disjoint-set forest with path compression and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(m: usize) -> Self {
        Self {
            parent: (0..m).collect(),
            size: vec![1; m],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merges the classes of `x` and `y`; returns false if already merged.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (mut a, mut b) = (self.find(x), self.find(y));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    pub fn class_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }

    pub fn into_partition(mut self) -> Partition {
        let m = self.len();
        let mut label = vec![usize::MAX; m];
        let rep = (0..m)
            .map(|x| {
                let r = self.find(x);
                if label[r] == usize::MAX {
                    label[r] = x;
                }
                label[r]
            })
            .collect();
        Partition { rep }
    }
}

/// An equivalence relation on `{0..m}`.
///
/// Each element maps to the least element of its class, so two partitions
/// are equal exactly when they have the same classes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    rep: Vec<usize>,
}

impl Partition {
    pub fn discrete(m: usize) -> Self {
        Self {
            rep: (0..m).collect(),
        }
    }

    pub fn total(m: usize) -> Self {
        Self { rep: vec![0; m] }
    }

    /// Builds a partition from a list of classes. Elements not mentioned form
    /// singletons; overlapping classes are merged.
    pub fn from_classes<C, I>(m: usize, classes: C) -> Self
    where
        C: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        let mut uf = UnionFind::new(m);
        for class in classes {
            let mut it = class.into_iter();
            if let Some(first) = it.next() {
                for x in it {
                    uf.union(first, x);
                }
            }
        }
        uf.into_partition()
    }

    /// Builds the partition whose classes are the fibers of `key`.
    pub fn from_key<K: Eq + std::hash::Hash>(m: usize, key: impl Fn(usize) -> K) -> Self {
        let mut first = std::collections::HashMap::new();
        let rep = (0..m).map(|x| *first.entry(key(x)).or_insert(x)).collect();
        Self { rep }
    }

    pub fn universe(&self) -> usize {
        self.rep.len()
    }

    /// Least element of the class of `x`.
    pub fn representative(&self, x: usize) -> usize {
        self.rep[x]
    }

    pub fn same_class(&self, x: usize, y: usize) -> bool {
        self.rep[x] == self.rep[y]
    }

    pub fn class_of(&self, x: usize) -> Vec<usize> {
        let r = self.rep[x];
        (0..self.rep.len()).filter(|&y| self.rep[y] == r).collect()
    }

    /// Classes sorted by least element, each sorted ascending.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut index = vec![usize::MAX; self.rep.len()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in 0..self.rep.len() {
            let r = self.rep[x];
            if index[r] == usize::MAX {
                index[r] = out.len();
                out.push(Vec::new());
            }
            out[index[r]].push(x);
        }
        out
    }

    pub fn num_classes(&self) -> usize {
        (0..self.rep.len()).filter(|&x| self.rep[x] == x).count()
    }

    pub fn is_discrete(&self) -> bool {
        self.num_classes() == self.rep.len()
    }

    /// True iff every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.rep.len() == other.rep.len()
            && (0..self.rep.len()).all(|x| other.same_class(x, self.rep[x]))
    }

    /// Meet (intersection) of two partitions of the same universe.
    pub fn meet(&self, other: &Partition) -> Partition {
        Partition::from_key(self.rep.len(), |x| (self.rep[x], other.rep[x]))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{:?}", self.classes())
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.classes().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let classes = Vec::<Vec<usize>>::deserialize(deserializer)?;
        let m = classes.iter().flatten().max().map_or(0, |x| x + 1);
        Ok(Partition::from_classes(m, classes))
    }
}
