//! Quasigroups through their derived loops.
//!
//! For a base point `a`, `x + y = R_a^-1(x) * L_a^-1(y)` is a loop with zero
//! `a*a` and `x*y = R_a(x) + L_a(y)`. The quasigroup is Abelian iff that loop
//! is an Abelian group and the residual maps `r_a`, `l_a` (defined by
//! `r_a(x) + a = R_a^-1(x)`) are automorphisms of it.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::congruence::{is_congruence, is_subuniverse};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::oracles::{HamiltonianDecision, Route};
use crate::partition::Partition;
use crate::perm::Permutation;
use crate::set::ElementSet;
use crate::table::{CayleyTable, Element};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoopDerivation {
    pub base: Element,
    /// `x -> x*a`
    pub right: Permutation,
    /// `x -> a*x`
    pub left: Permutation,
    pub plus: CayleyTable,
    pub zero: Element,
    pub r: Permutation,
    pub l: Permutation,
}

impl LoopDerivation {
    /// Sum in the derived loop.
    #[inline]
    pub fn add(&self, x: Element, y: Element) -> Element {
        self.plus.op(x, y)
    }

    /// The `z` with `z + y = x`.
    pub fn sub(&self, x: Element, y: Element) -> Element {
        self.plus
            .elements()
            .find(|&z| self.plus.op(z, y) == x)
            .expect("loop has right division")
    }

    fn check(&self, t: &CayleyTable) -> Result<()> {
        let fail = |m: String| Err(Error::Verification(m));
        let a = self.base;
        if self.plus.identity_of() != Some(self.zero) {
            return fail(format!("derived loop: {} is not the identity", self.zero));
        }
        if self.right.apply(a) != self.zero || self.left.apply(a) != self.zero {
            return fail("derived loop: translations do not send the base to zero".into());
        }
        for x in t.elements() {
            for y in t.elements() {
                if t.op(x, y) != self.add(self.right.apply(x), self.left.apply(y)) {
                    return fail(format!("derived loop: product of ({x},{y}) not reconstructed"));
                }
            }
        }
        let (ri, li) = (self.right.inverse(), self.left.inverse());
        for x in t.elements() {
            if self.add(self.r.apply(x), a) != ri.apply(x) || self.add(self.l.apply(x), a) != li.apply(x) {
                return fail(format!("derived loop: residual maps wrong at {x}"));
            }
        }
        Ok(())
    }
}

fn column(t: &CayleyTable, a: Element) -> Permutation {
    Permutation::from_images(t.elements().map(|x| t.op(x, a)).collect()).expect("quasigroup column")
}

fn row(t: &CayleyTable, a: Element) -> Permutation {
    Permutation::from_images(t.row(a).collect()).expect("quasigroup row")
}

/// Builds the loop at base `a` and verifies its defining identities.
pub fn derive_loop(t: &CayleyTable, a: Element) -> Result<LoopDerivation> {
    t.require_quasigroup()?;
    t.check_element(a)?;
    let right = column(t, a);
    let left = row(t, a);
    let (ri, li) = (right.inverse(), left.inverse());
    let plus = CayleyTable::from_fn(t.order(), |x, y| t.op(ri.apply(x), li.apply(y)))?;
    let mut d = LoopDerivation {
        base: a,
        right,
        left,
        plus,
        zero: t.op(a, a),
        r: Permutation::identity(t.order()),
        l: Permutation::identity(t.order()),
    };
    let r: Vec<_> = t.elements().map(|x| d.sub(ri.apply(x), a)).collect();
    let l: Vec<_> = t.elements().map(|x| d.sub(li.apply(x), a)).collect();
    d.r = Permutation::from_images(r).ok_or_else(|| Error::Verification("r is not a bijection".into()))?;
    d.l = Permutation::from_images(l).ok_or_else(|| Error::Verification("l is not a bijection".into()))?;
    d.check(t)?;
    Ok(d)
}

/// Orders of `R_a` and `L_a`: `R_a^-1` is `x -> (..(x*a)*a..)*a` with
/// `n_right - 1` factors, so both inverses are polynomial.
pub fn translation_inverse_order(t: &CayleyTable, a: Element) -> Result<(usize, usize)> {
    t.require_quasigroup()?;
    t.check_element(a)?;
    Ok((column(t, a).order(), row(t, a).order()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QuasigroupFailure {
    LoopNotAssociative { x: Element, y: Element, z: Element },
    LoopNotCommutative { x: Element, y: Element },
    /// `r(x+y) != r(x)+r(y)`
    RNotHomomorphism { x: Element, y: Element, image_of_sum: Element, sum_of_images: Element },
    LNotHomomorphism { x: Element, y: Element, image_of_sum: Element, sum_of_images: Element },
}

impl fmt::Display for QuasigroupFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            QuasigroupFailure::LoopNotAssociative { x, y, z } => {
                write!(f, "derived loop not associative at ({x},{y},{z})")
            }
            QuasigroupFailure::LoopNotCommutative { x, y } => {
                write!(f, "derived loop not commutative at ({x},{y})")
            }
            QuasigroupFailure::RNotHomomorphism { x, y, image_of_sum, sum_of_images } => write!(
                f,
                "r is not a homomorphism: r({x}+{y}) = {image_of_sum} but r({x})+r({y}) = {sum_of_images}"
            ),
            QuasigroupFailure::LNotHomomorphism { x, y, image_of_sum, sum_of_images } => write!(
                f,
                "l is not a homomorphism: l({x}+{y}) = {image_of_sum} but l({x})+l({y}) = {sum_of_images}"
            ),
        }
    }
}

fn hom_failure(d: &LoopDerivation, p: &Permutation) -> Option<(Element, Element, Element, Element)> {
    let (x, y) = p.homomorphism_witness(&d.plus)?;
    Some((x, y, p.apply(d.add(x, y)), d.add(p.apply(x), p.apply(y))))
}

/// `Ok(None)` when the quasigroup is Abelian; the base defaults to 0.
pub fn quasigroup_abelian_witness(t: &CayleyTable, base: Option<Element>) -> Result<Option<QuasigroupFailure>> {
    let d = derive_loop(t, base.unwrap_or(0))?;
    if let Some((x, y, z)) = d.plus.associativity_witness() {
        return Ok(Some(QuasigroupFailure::LoopNotAssociative { x, y, z }));
    }
    if let Some((x, y)) = d.plus.commutativity_witness() {
        return Ok(Some(QuasigroupFailure::LoopNotCommutative { x, y }));
    }
    if let Some((x, y, image_of_sum, sum_of_images)) = hom_failure(&d, &d.r) {
        return Ok(Some(QuasigroupFailure::RNotHomomorphism { x, y, image_of_sum, sum_of_images }));
    }
    if let Some((x, y, image_of_sum, sum_of_images)) = hom_failure(&d, &d.l) {
        return Ok(Some(QuasigroupFailure::LNotHomomorphism { x, y, image_of_sum, sum_of_images }));
    }
    Ok(None)
}

pub fn quasigroup_abelian_fast(t: &CayleyTable, base: Option<Element>) -> Result<bool> {
    Ok(quasigroup_abelian_witness(t, base)?.is_none())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareRootSpectrum {
    /// For every element `v`, the number of `x` with `x*x = v`.
    pub counts: BTreeMap<Element, usize>,
    /// All nonzero counts are equal. Abelian quasigroups are always uniform.
    pub uniform: bool,
}

pub fn square_root_spectrum(t: &CayleyTable) -> SquareRootSpectrum {
    let mut counts: BTreeMap<Element, usize> = t.elements().map(|v| (v, 0)).collect();
    for x in t.elements() {
        *counts.get_mut(&t.op(x, x)).unwrap() += 1;
    }
    let mut nonzero = counts.values().filter(|&&c| c > 0);
    let first = nonzero.next().copied();
    let uniform = nonzero.all(|&c| Some(c) == first);
    SquareRootSpectrum { counts, uniform }
}

/// Abelian quasigroups are Hamiltonian; otherwise the oracle decides.
pub fn quasigroup_hamiltonian_fast(t: &CayleyTable, limits: &Limits) -> Result<HamiltonianDecision> {
    if quasigroup_abelian_fast(t, None)? {
        Ok(HamiltonianDecision::by_theorem(Route::QuasigroupTheorem))
    } else {
        Ok(HamiltonianDecision::by_oracle(t, limits))
    }
}

/// Cosets of the subgroup `B` of the loop derived at `a in B`.
///
/// The result is checked to be a congruence with `B` as a class.
pub fn coset_congruence(t: &CayleyTable, b: &ElementSet, a: Element) -> Result<Partition> {
    if b.universe() != t.order() {
        return Err(Error::Precondition("subset lives in a different universe".into()));
    }
    if !b.contains(a) {
        return Err(Error::Precondition(format!("base {a} is not in the subuniverse")));
    }
    if !is_subuniverse(t, b) {
        return Err(Error::Precondition("subset is not closed".into()));
    }
    if !quasigroup_abelian_fast(t, Some(a))? {
        return Err(Error::Precondition("quasigroup is not Abelian".into()));
    }
    let d = derive_loop(t, a)?;
    let p = Partition::from_key(t.order(), |c| b.iter().map(|x| d.add(c, x)).min().unwrap());
    if !is_congruence(t, &p)? {
        return Err(Error::Verification("coset partition is not a congruence".into()));
    }
    if p.class_of(a) != b.to_vec() {
        return Err(Error::Verification("subuniverse is not a coset class".into()));
    }
    Ok(p)
}
