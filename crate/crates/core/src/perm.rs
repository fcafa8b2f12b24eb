//! Permutations of `{0..n}` and their interplay with tables.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::table::{CayleyTable, Element};

/// A bijection of `{0..n}`, stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(Vec<Element>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// Wraps an image array, returning `None` if it is not a bijection.
    pub fn from_images(images: Vec<Element>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return None;
            }
        }
        Some(Self(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: Element) -> Element {
        self.0[x]
    }

    pub fn images(&self) -> &[Element] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Self(inv)
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// Cycles of length at least two, each starting at its least element.
    pub fn cycles(&self) -> Vec<Vec<Element>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.0[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.0[x];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Least `k >= 1` with `self^k = id`.
    pub fn order(&self) -> usize {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycles()
            .iter()
            .fold(1, |acc, c| acc / gcd(acc, c.len()) * c.len())
    }

    /// One-line cycle notation, `()` for the identity.
    pub fn cycle_notation(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".into();
        }
        cycles
            .iter()
            .map(|c| {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("({})", parts.join(" "))
            })
            .collect()
    }

    /// First pair `(x, y)` with `p(x*y) != p(x)*p(y)` in `t`.
    pub fn homomorphism_witness(&self, t: &CayleyTable) -> Option<(Element, Element)> {
        for x in t.elements() {
            for y in t.elements() {
                if self.apply(t.op(x, y)) != t.op(self.apply(x), self.apply(y)) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_automorphism_of(&self, t: &CayleyTable) -> bool {
        self.len() == t.order() && self.homomorphism_witness(t).is_none()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_notation())
    }
}
