//! Ground-truth deciders.
//!
//! These work for arbitrary tables and are what every structural decider is
//! checked against. The Abelian oracle decides the term condition on the
//! square table: `A` is Abelian iff the diagonal of `A x A` is a single class
//! of the congruence generated by collapsing the diagonal.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::congruence::{all_subuniverses, generate, generated_congruence, is_block_of_some_congruence};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::partition::Partition;
use crate::set::ElementSet;
use crate::table::{CayleyTable, Element};

/// Three-valued answer. `Undetermined` is never coerced to either side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Yes,
    No,
    Undetermined,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Verdict::Yes => Some(true),
            Verdict::No => Some(false),
            Verdict::Undetermined => None,
        }
    }

    pub fn is_determined(self) -> bool {
        self != Verdict::Undetermined
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Undetermined => "undetermined",
        })
    }
}

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Brute force over the definition.
    Oracle,
    /// Groupoid with identity: Abelian iff a commutative cancellative semigroup.
    IdentityGroupoidTheorem,
    /// Quasigroup: derived loop is an Abelian group with automorphic residuals.
    QuasigroupTheorem,
    /// Semigroup: inflation of a rectangular band of Abelian groups.
    SemigroupTheorem,
    /// Semigroup: stationary and `aub = cud` implies `avb = cvd`.
    SemigroupCriterion,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Oracle => "oracle",
            Route::IdentityGroupoidTheorem => "identity-groupoid-theorem",
            Route::QuasigroupTheorem => "quasigroup-theorem",
            Route::SemigroupTheorem => "semigroup-theorem",
            Route::SemigroupCriterion => "semigroup-criterion",
        })
    }
}

/// A Hamiltonian verdict together with the route that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HamiltonianDecision {
    pub verdict: Verdict,
    pub route: Route,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offending: Option<ElementSet>,
}

impl HamiltonianDecision {
    pub(crate) fn by_theorem(route: Route) -> Self {
        Self {
            verdict: Verdict::Yes,
            route,
            offending: None,
        }
    }

    pub(crate) fn by_oracle(t: &CayleyTable, limits: &Limits) -> Self {
        let out = hamiltonian_oracle(t, limits);
        Self {
            verdict: out.verdict,
            route: Route::Oracle,
            offending: out.offending,
        }
    }
}

fn square(t: &CayleyTable, limits: &Limits) -> Result<CayleyTable> {
    let n = t.order();
    if n > limits.max_square_base {
        return Err(Error::CapExceeded {
            what: "square-table base order",
            limit: limits.max_square_base,
            actual: n,
        });
    }
    let wide = Limits {
        max_order: n * n,
        ..*limits
    };
    t.direct_product(t, &wide)
}

/// Congruence of `A x A` generated by the diagonal. With `reduced`, only the
/// pairs `((a0,a0),(b,b))` are used; otherwise all pairs of diagonal elements.
/// Both give the same congruence by transitivity.
pub fn diagonal_congruence(t: &CayleyTable, reduced: bool, limits: &Limits) -> Result<Partition> {
    let sq = square(t, limits)?;
    let n = t.order();
    let diag = |x: Element| x * n + x;
    let pairs: Vec<_> = if reduced {
        (0..n).map(|b| (diag(0), diag(b))).collect()
    } else {
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (diag(a), diag(b))))
            .collect()
    };
    Ok(generated_congruence(&sq, &pairs))
}

/// Decides the term condition for all polynomial operations.
///
/// `Undetermined` only when the square table would exceed the cap.
pub fn abelian_oracle(t: &CayleyTable, limits: &Limits) -> Verdict {
    let Ok(sq) = square(t, limits) else {
        return Verdict::Undetermined;
    };
    let n = t.order();
    let pairs: Vec<_> = (0..n).map(|b| (0, b * n + b)).collect();
    // The class of (0,0) holds the whole diagonal once the generators are
    // processed; anything beyond n elements means it escaped the diagonal.
    let mut uf = generate(&sq, &pairs, |uf| uf.class_size(0) > n);
    Verdict::from_bool(uf.class_size(0) == n)
}

/// A polynomial term in one distinguished variable `x` and parameters
/// `y1, y2, ...`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var,
    /// Zero-based parameter index: `Param(0)` is `y1`.
    Param(usize),
    Op(Box<Term>, Box<Term>),
}

impl Term {
    pub fn op(l: Term, r: Term) -> Term {
        Term::Op(Box::new(l), Box::new(r))
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var | Term::Param(_) => 0,
            Term::Op(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Number of parameters, i.e. one past the largest parameter index.
    pub fn arity(&self) -> usize {
        match self {
            Term::Var => 0,
            Term::Param(i) => i + 1,
            Term::Op(l, r) => l.arity().max(r.arity()),
        }
    }

    pub fn contains_var(&self) -> bool {
        match self {
            Term::Var => true,
            Term::Param(_) => false,
            Term::Op(l, r) => l.contains_var() || r.contains_var(),
        }
    }

    fn leaves<'a>(&'a self, out: &mut Vec<&'a Term>) {
        match self {
            Term::Op(l, r) => {
                l.leaves(out);
                r.leaves(out);
            }
            leaf => out.push(leaf),
        }
    }

    /// Parameters first occur in the order `y1, y2, ...` reading left to right.
    pub fn is_canonical(&self) -> bool {
        let mut leaves = Vec::new();
        self.leaves(&mut leaves);
        let mut next = 0;
        for leaf in leaves {
            if let Term::Param(i) = leaf {
                if *i > next {
                    return false;
                }
                if *i == next {
                    next += 1;
                }
            }
        }
        true
    }

    pub fn eval(&self, t: &CayleyTable, x: Element, params: &[Element]) -> Element {
        match self {
            Term::Var => x,
            Term::Param(i) => params[*i],
            Term::Op(l, r) => t.op(l.eval(t, x, params), r.eval(t, x, params)),
        }
    }
}

/// Prefix notation: `(* x y1)`.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var => write!(f, "x"),
            Term::Param(i) => write!(f, "y{}", i + 1),
            Term::Op(l, r) => write!(f, "(* {l} {r})"),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Every canonical term containing `x` with depth at most `max_depth` and at
/// most `max_params` parameters, shallowest first.
pub fn enumerate_terms(max_depth: usize, max_params: usize) -> Vec<Term> {
    let mut leaves = vec![Term::Var];
    leaves.extend((0..max_params).map(Term::Param));
    // levels[d] holds the terms of depth exactly d
    let mut levels: Vec<Vec<Term>> = vec![leaves];
    for d in 1..=max_depth {
        let below: Vec<&Term> = levels.iter().flatten().collect();
        let mut level = Vec::new();
        for l in &below {
            for r in &below {
                if l.depth().max(r.depth()) == d - 1 {
                    level.push(Term::op((*l).clone(), (*r).clone()));
                }
            }
        }
        levels.push(level);
    }
    levels
        .into_iter()
        .flatten()
        .filter(|t| t.contains_var() && t.is_canonical())
        .collect()
}

/// A concrete failure of the term condition:
/// `t(u, c) = t(u, d)` but `t(v, c) != t(v, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TcWitness {
    pub term: Term,
    pub u: Element,
    pub v: Element,
    pub c: Vec<Element>,
    pub d: Vec<Element>,
    /// `[t(u,c), t(u,d), t(v,c), t(v,d)]`
    pub values: [Element; 4],
}

impl TcWitness {
    /// Builds and evaluates a witness; `None` if it does not violate the
    /// term condition in `t`.
    pub fn new(
        t: &CayleyTable,
        term: Term,
        u: Element,
        v: Element,
        c: Vec<Element>,
        d: Vec<Element>,
    ) -> Option<Self> {
        let values = [
            term.eval(t, u, &c),
            term.eval(t, u, &d),
            term.eval(t, v, &c),
            term.eval(t, v, &d),
        ];
        (values[0] == values[1] && values[2] != values[3]).then_some(Self {
            term,
            u,
            v,
            c,
            d,
            values,
        })
    }

    pub fn verify(&self, t: &CayleyTable) -> bool {
        TcWitness::new(t, self.term.clone(), self.u, self.v, self.c.clone(), self.d.clone())
            .is_some_and(|w| w.values == self.values)
    }
}

/// Looks for a term-condition failure among terms of depth at most
/// `max_depth` with up to three parameters.
///
/// For each term, parameter pairs `(c, d)` are scanned exhaustively when
/// there are at most `samples` of them, otherwise `samples` pairs are drawn
/// with a generator seeded by `seed`. `None` is not a proof of anything.
pub fn tc_violation_search(
    t: &CayleyTable,
    max_depth: usize,
    samples: usize,
    seed: u64,
) -> Option<TcWitness> {
    let n = t.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for term in enumerate_terms(max_depth, 3) {
        let k = term.arity();
        let total = (n as u128).checked_pow(2 * k as u32).unwrap_or(u128::MAX);
        let mut c = vec![0; k];
        let mut d = vec![0; k];
        let try_pair = |c: &[Element], d: &[Element]| -> Option<TcWitness> {
            let mut same = None;
            let mut differ = None;
            for x in 0..n {
                if term.eval(t, x, c) == term.eval(t, x, d) {
                    same.get_or_insert(x);
                } else {
                    differ.get_or_insert(x);
                }
                if let (Some(u), Some(v)) = (same, differ) {
                    return TcWitness::new(t, term.clone(), u, v, c.to_vec(), d.to_vec());
                }
            }
            None
        };
        if total <= samples as u128 {
            for idx in 0..total as usize {
                let mut rest = idx;
                for slot in c.iter_mut().chain(d.iter_mut()) {
                    *slot = rest % n;
                    rest /= n;
                }
                if let Some(w) = try_pair(&c, &d) {
                    return Some(w);
                }
            }
        } else {
            for _ in 0..samples {
                for slot in c.iter_mut().chain(d.iter_mut()) {
                    *slot = rng.random_range(0..n);
                }
                if let Some(w) = try_pair(&c, &d) {
                    return Some(w);
                }
            }
        }
    }
    None
}

/// Result of the Hamiltonian oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HamiltonianOutcome {
    pub verdict: Verdict,
    /// First subuniverse (in canonical order) that is not a block.
    pub offending: Option<ElementSet>,
    pub subuniverses: usize,
}

/// Checks that every nonempty subuniverse is a block of some congruence.
pub fn hamiltonian_oracle(t: &CayleyTable, limits: &Limits) -> HamiltonianOutcome {
    let family = all_subuniverses(t, limits);
    if !family.complete {
        return HamiltonianOutcome {
            verdict: Verdict::Undetermined,
            offending: None,
            subuniverses: family.sets.len(),
        };
    }
    let offending = family
        .sets
        .iter()
        .find(|b| !is_block_of_some_congruence(t, b).expect("family members are closed"))
        .cloned();
    HamiltonianOutcome {
        verdict: Verdict::from_bool(offending.is_none()),
        offending,
        subuniverses: family.sets.len(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// `u*b = u*c` but `v*b != v*c`.
    Left,
    /// `b*u = c*u` but `b*v != c*v`.
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StationarityWitness {
    pub side: Side,
    pub u: Element,
    pub v: Element,
    pub b: Element,
    pub c: Element,
}

impl StationarityWitness {
    pub fn verify(&self, t: &CayleyTable) -> bool {
        let m = |x, y| match self.side {
            Side::Left => t.op(x, y),
            Side::Right => t.op(y, x),
        };
        m(self.u, self.b) == m(self.u, self.c) && m(self.v, self.b) != m(self.v, self.c)
    }
}

/// `Ok(None)` iff the semigroup is stationary.
pub fn stationary_check(t: &CayleyTable) -> Result<Option<StationarityWitness>> {
    t.require_associative()?;
    Ok(stationarity_witness(t))
}

fn stationarity_witness(t: &CayleyTable) -> Option<StationarityWitness> {
    for side in [Side::Left, Side::Right] {
        let m = |x, y| match side {
            Side::Left => t.op(x, y),
            Side::Right => t.op(y, x),
        };
        for b in t.elements() {
            for c in b + 1..t.order() {
                let equal = t.elements().find(|&u| m(u, b) == m(u, c));
                let unequal = t.elements().find(|&v| m(v, b) != m(v, c));
                if let (Some(u), Some(v)) = (equal, unequal) {
                    return Some(StationarityWitness { side, u, v, b, c });
                }
            }
        }
    }
    None
}

/// Why a semigroup fails the two-sided sandwich criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CriterionFailure {
    NotStationary(StationarityWitness),
    /// `a*u*b = c*u*d` but `a*v*b != c*v*d`.
    Sandwich {
        a: Element,
        b: Element,
        c: Element,
        d: Element,
        u: Element,
        v: Element,
    },
}

/// The semigroup form of the term condition: stationarity plus
/// `aub = cud => avb = cvd`. Scans all `(a, b, c, d)` and, for each, checks
/// that the set of `u` with `aub = cud` is empty or everything.
pub fn abelian_semigroup_criterion_witness(t: &CayleyTable) -> Result<Option<CriterionFailure>> {
    t.require_associative()?;
    if let Some(w) = stationarity_witness(t) {
        return Ok(Some(CriterionFailure::NotStationary(w)));
    }
    let n = t.order();
    for a in 0..n {
        for c in 0..n {
            for b in 0..n {
                for d in 0..n {
                    let mut equal = None;
                    let mut unequal = None;
                    for u in 0..n {
                        if t.op(t.op(a, u), b) == t.op(t.op(c, u), d) {
                            equal.get_or_insert(u);
                        } else {
                            unequal.get_or_insert(u);
                        }
                        if let (Some(u), Some(v)) = (equal, unequal) {
                            return Ok(Some(CriterionFailure::Sandwich { a, b, c, d, u, v }));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn abelian_semigroup_criterion(t: &CayleyTable) -> Result<bool> {
    Ok(abelian_semigroup_criterion_witness(t)?.is_none())
}

/// Exponents `1 <= i < j` with `a^i = a^j`, minimal `i` first, then `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicityWitness {
    pub element: Element,
    pub i: usize,
    pub j: usize,
}

pub fn periodicity_witness(t: &CayleyTable, a: Element) -> Result<PeriodicityWitness> {
    t.require_associative()?;
    t.check_element(a)?;
    // a^1 .. a^(n+1) must repeat.
    let powers: Vec<Element> = std::iter::successors(Some(a), |&p| Some(t.op(p, a)))
        .take(t.order() + 1)
        .collect();
    for i in 0..powers.len() {
        if let Some(j) = (i + 1..powers.len()).find(|&j| powers[j] == powers[i]) {
            return Ok(PeriodicityWitness {
                element: a,
                i: i + 1,
                j: j + 1,
            });
        }
    }
    unreachable!("pigeonhole: n+1 powers in a set of size n")
}
