//! Congruence generation and subuniverse machinery.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::partition::{Partition, UnionFind};
use crate::set::ElementSet;
use crate::table::{CayleyTable, Element};

/// Least congruence of `t` containing every pair in `pairs`.
///
/// Each effective merge `(x, y)` queues its translates `(ax, ay)` and
/// `(xa, ya)` for every `a`; the fixpoint is compatible with the operation.
pub fn generated_congruence(t: &CayleyTable, pairs: &[(Element, Element)]) -> Partition {
    generate(t, pairs, |_| false).into_partition()
}

/// Runs the generation loop, stopping as soon as `stop` reports true after a
/// merge. Returns the union-find in its current state.
pub(crate) fn generate(
    t: &CayleyTable,
    pairs: &[(Element, Element)],
    mut stop: impl FnMut(&mut UnionFind) -> bool,
) -> UnionFind {
    let n = t.order();
    let mut uf = UnionFind::new(n);
    let mut queue: VecDeque<(Element, Element)> = pairs.iter().copied().collect();
    while let Some((x, y)) = queue.pop_front() {
        if !uf.union(x, y) {
            continue;
        }
        if stop(&mut uf) {
            break;
        }
        for a in 0..n {
            queue.push_back((t.op(a, x), t.op(a, y)));
            queue.push_back((t.op(x, a), t.op(y, a)));
        }
    }
    uf
}

/// Witness that a partition is not compatible: `x ~ x'` and `y ~ y'` but
/// `x*y` and `x'*y'` lie in different classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatibilityWitness {
    pub x: Element,
    pub x2: Element,
    pub y: Element,
    pub y2: Element,
}

/// Checks compatibility; `Ok(None)` means `p` is a congruence.
///
/// It suffices to vary one argument at a time.
pub fn congruence_witness(t: &CayleyTable, p: &Partition) -> Result<Option<CompatibilityWitness>> {
    if p.universe() != t.order() {
        return Err(Error::UniverseMismatch {
            partition: p.universe(),
            order: t.order(),
        });
    }
    for x in t.elements() {
        let r = p.representative(x);
        if r == x {
            continue;
        }
        for a in t.elements() {
            if !p.same_class(t.op(a, x), t.op(a, r)) {
                return Ok(Some(CompatibilityWitness {
                    x: a,
                    x2: a,
                    y: x,
                    y2: r,
                }));
            }
            if !p.same_class(t.op(x, a), t.op(r, a)) {
                return Ok(Some(CompatibilityWitness {
                    x,
                    x2: r,
                    y: a,
                    y2: a,
                }));
            }
        }
    }
    Ok(None)
}

pub fn is_congruence(t: &CayleyTable, p: &Partition) -> Result<bool> {
    Ok(congruence_witness(t, p)?.is_none())
}

/// Least closed superset of `seed`.
pub fn subuniverse_closure(t: &CayleyTable, seed: &ElementSet) -> ElementSet {
    let mut closed = seed.clone();
    let mut members: Vec<Element> = seed.to_vec();
    let mut next = 0;
    // Invariant: all products among members[..next] are already in `closed`.
    while next < members.len() {
        let z = members[next];
        next += 1;
        for k in 0..next {
            let w = members[k];
            for v in [t.op(z, w), t.op(w, z)] {
                if closed.insert(v) {
                    members.push(v);
                }
            }
        }
    }
    closed
}

pub fn is_subuniverse(t: &CayleyTable, s: &ElementSet) -> bool {
    s.iter().all(|x| s.iter().all(|y| s.contains(t.op(x, y))))
}

/// The nonempty subuniverses of a table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubuniverseFamily {
    /// Closed sets in canonical order (size, then lexicographic).
    pub sets: Vec<ElementSet>,
    /// False when a cap stopped the enumeration early.
    pub complete: bool,
}

impl SubuniverseFamily {
    /// Members other than the whole universe.
    pub fn proper(&self, order: usize) -> impl Iterator<Item = &ElementSet> {
        self.sets.iter().filter(move |s| s.len() < order)
    }
}

/// Enumerates all nonempty subuniverses: singleton closures first, then
/// every known closed set grown by one outside element and re-closed.
pub fn all_subuniverses(t: &CayleyTable, limits: &Limits) -> SubuniverseFamily {
    let n = t.order();
    if n > limits.max_subuniverse_order {
        return SubuniverseFamily {
            sets: Vec::new(),
            complete: false,
        };
    }
    let mut found: BTreeSet<ElementSet> = BTreeSet::new();
    let mut queue: VecDeque<ElementSet> = VecDeque::new();
    let mut complete = true;
    'outer: for x in t.elements() {
        let s = subuniverse_closure(t, &ElementSet::singleton(n, x));
        if found.insert(s.clone()) {
            queue.push_back(s);
            if found.len() > limits.max_subuniverses {
                complete = false;
                break 'outer;
            }
        }
    }
    while complete {
        let Some(s) = queue.pop_front() else { break };
        for x in t.elements().filter(|&x| !s.contains(x)) {
            let mut seed = s.clone();
            seed.insert(x);
            let grown = subuniverse_closure(t, &seed);
            if !found.contains(&grown) {
                found.insert(grown.clone());
                queue.push_back(grown);
                if found.len() > limits.max_subuniverses {
                    complete = false;
                    break;
                }
            }
        }
    }
    SubuniverseFamily {
        sets: found.into_iter().collect(),
        complete,
    }
}

/// Decides whether the closed set `b` is a class of some congruence.
///
/// `b` is a block of some congruence iff it is a class of the least
/// congruence collapsing it, generated by `(b0, b)` for `b` in `b`.
pub fn is_block_of_some_congruence(t: &CayleyTable, b: &ElementSet) -> Result<bool> {
    let Some(b0) = b.first() else {
        return Err(Error::Precondition("block must be nonempty".into()));
    };
    for x in b.iter() {
        for y in b.iter() {
            let v = t.op(x, y);
            if !b.contains(v) {
                return Err(Error::NotClosed(x, y, v));
            }
        }
    }
    let pairs: Vec<_> = b.iter().map(|x| (b0, x)).collect();
    let target = b.len();
    // Stop as soon as the class of b0 outgrows b.
    let mut uf = generate(t, &pairs, |uf| uf.class_size(b0) > target);
    Ok(uf.class_size(b0) == target)
}
