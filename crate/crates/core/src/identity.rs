//! Groupoids with an identity element.
//!
//! Such a groupoid is Abelian iff it is a commutative semigroup in which
//! `a*x = b` has at most one solution; at finite order that is exactly an
//! Abelian group, and every finite Abelian group is Hamiltonian.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::oracles::{HamiltonianDecision, Route};
use crate::table::{CayleyTable, Element};

/// First condition of the characterization that fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IdentityFailure {
    NotAssociative { x: Element, y: Element, z: Element },
    NotCommutative { x: Element, y: Element },
    /// `a*c1 = a*c2` with `c1 != c2`.
    DivisionNotUnique { a: Element, c1: Element, c2: Element },
}

impl fmt::Display for IdentityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IdentityFailure::NotAssociative { x, y, z } => {
                write!(f, "not associative at ({x},{y},{z})")
            }
            IdentityFailure::NotCommutative { x, y } => write!(f, "not commutative at ({x},{y})"),
            IdentityFailure::DivisionNotUnique { a, c1, c2 } => {
                write!(f, "division not unique: {a}*{c1} = {a}*{c2}")
            }
        }
    }
}

fn require_identity(t: &CayleyTable) -> Result<Element> {
    t.identity_of()
        .ok_or_else(|| Error::Precondition("groupoid has no identity element".into()))
}

/// `Ok(None)` when the groupoid is Abelian.
pub fn identity_abelian_witness(t: &CayleyTable) -> Result<Option<IdentityFailure>> {
    require_identity(t)?;
    if let Some((x, y, z)) = t.associativity_witness() {
        return Ok(Some(IdentityFailure::NotAssociative { x, y, z }));
    }
    if let Some((x, y)) = t.commutativity_witness() {
        return Ok(Some(IdentityFailure::NotCommutative { x, y }));
    }
    for a in t.elements() {
        let mut seen: Vec<Option<Element>> = vec![None; t.order()];
        for c in t.elements() {
            let v = t.op(a, c);
            if let Some(c1) = seen[v] {
                return Ok(Some(IdentityFailure::DivisionNotUnique { a, c1, c2: c }));
            }
            seen[v] = Some(c);
        }
    }
    Ok(None)
}

pub fn identity_abelian_fast(t: &CayleyTable) -> Result<bool> {
    Ok(identity_abelian_witness(t)?.is_none())
}

/// Abelian implies Hamiltonian; otherwise the oracle decides.
pub fn identity_hamiltonian_fast(t: &CayleyTable, limits: &Limits) -> Result<HamiltonianDecision> {
    if identity_abelian_fast(t)? {
        Ok(HamiltonianDecision::by_theorem(Route::IdentityGroupoidTheorem))
    } else {
        Ok(HamiltonianDecision::by_oracle(t, limits))
    }
}
