//! Structure of finite semigroups.
//!
//! A finite semigroup is Abelian iff it is an inflation of a rectangular band
//! of Abelian groups in which the product of idempotents is idempotent. The
//! band lives on `C = A*A`; its groups are the classes of `Z = X ∧ Y`, rows
//! are `X`-classes and columns are `Y`-classes. Every finite Abelian
//! semigroup is also Hamiltonian.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::constructors::{leftzero, rightzero};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::oracles::{HamiltonianDecision, Route};
use crate::set::ElementSet;
use crate::table::{CayleyTable, Element};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RelationName {
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "phi")]
    Phi,
    #[serde(rename = "psi")]
    Psi,
    #[serde(rename = "phi-forall")]
    PhiForall,
    #[serde(rename = "psi-forall")]
    PsiForall,
    X,
    Y,
    Z,
}

/// A binary relation on a subset of the table's elements.
///
/// Relations defined by an existential clause need not be transitive, so the
/// raw pairs are kept and equivalence is a property, not an assumption.
#[derive(Clone, PartialEq, Eq)]
pub struct Relation {
    pub name: RelationName,
    domain: ElementSet,
    matrix: Vec<bool>,
}

impl Relation {
    fn build(name: RelationName, domain: ElementSet, f: impl Fn(Element, Element) -> bool) -> Self {
        let n = domain.universe();
        let mut matrix = vec![false; n * n];
        for x in domain.iter() {
            for y in domain.iter() {
                matrix[x * n + y] = f(x, y);
            }
        }
        Self { name, domain, matrix }
    }

    pub fn domain(&self) -> &ElementSet {
        &self.domain
    }

    pub fn related(&self, x: Element, y: Element) -> bool {
        self.matrix[x * self.domain.universe() + y]
    }

    /// Elements of the domain related to `x`.
    pub fn class_of(&self, x: Element) -> ElementSet {
        let n = self.domain.universe();
        ElementSet::from_elements(n, self.domain.iter().filter(|&y| self.related(x, y)))
    }

    pub fn is_equivalence(&self) -> bool {
        let d = &self.domain;
        d.iter().all(|x| self.related(x, x))
            && d.iter().all(|x| d.iter().all(|y| self.related(x, y) == self.related(y, x)))
            && d.iter().all(|x| {
                d.iter()
                    .all(|y| !self.related(x, y) || d.iter().all(|z| !self.related(y, z) || self.related(x, z)))
            })
    }

    /// Classes in order of least element, if this is an equivalence.
    pub fn classes(&self) -> Option<Vec<Vec<Element>>> {
        if !self.is_equivalence() {
            return None;
        }
        let mut out: Vec<Vec<Element>> = Vec::new();
        for x in self.domain.iter() {
            if !out.iter().any(|c| c.contains(&x)) {
                out.push(self.class_of(x).to_vec());
            }
        }
        Some(out)
    }

    pub fn pairs(&self) -> Vec<(Element, Element)> {
        let d = &self.domain;
        d.iter()
            .flat_map(|x| d.iter().filter(move |&y| self.related(x, y)).map(move |y| (x, y)))
            .collect()
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.classes() {
            Some(c) => write!(f, "{:?}{:?}", self.name, c),
            None => write!(f, "{:?}(not an equivalence){:?}", self.name, self.pairs()),
        }
    }
}

impl Serialize for Relation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            name: RelationName,
            domain: &'a ElementSet,
            equivalence: bool,
            #[serde(skip_serializing_if = "Option::is_none")]
            classes: Option<Vec<Vec<Element>>>,
            #[serde(skip_serializing_if = "Option::is_none")]
            pairs: Option<Vec<(Element, Element)>>,
        }
        let classes = self.classes();
        let pairs = if classes.is_none() { Some(self.pairs()) } else { None };
        Repr {
            name: self.name,
            domain: &self.domain,
            equivalence: classes.is_some(),
            classes,
            pairs,
        }
        .serialize(s)
    }
}

/// `a α b` iff `a` and `b` act identically on both sides.
pub fn relation_alpha(t: &CayleyTable) -> Result<Relation> {
    t.require_associative()?;
    Ok(Relation::build(RelationName::Alpha, ElementSet::full(t.order()), |a, b| {
        t.elements().all(|x| t.op(a, x) == t.op(b, x) && t.op(x, a) == t.op(x, b))
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiPsi {
    /// `x Φ y` iff `xz = yz` for some `z`.
    pub phi: Relation,
    /// `x Ψ y` iff `zx = zy` for some `z`.
    pub psi: Relation,
    pub phi_forall: Relation,
    pub psi_forall: Relation,
    /// Both existential forms coincide with their universal forms.
    pub agree: bool,
}

pub fn relations_phi_psi(t: &CayleyTable) -> Result<PhiPsi> {
    t.require_associative()?;
    let full = ElementSet::full(t.order());
    let right = |x, y, z| t.op(x, z) == t.op(y, z);
    let left = |x, y, z| t.op(z, x) == t.op(z, y);
    let phi = Relation::build(RelationName::Phi, full.clone(), |x, y| t.elements().any(|z| right(x, y, z)));
    let psi = Relation::build(RelationName::Psi, full.clone(), |x, y| t.elements().any(|z| left(x, y, z)));
    let phi_forall =
        Relation::build(RelationName::PhiForall, full.clone(), |x, y| t.elements().all(|z| right(x, y, z)));
    let psi_forall = Relation::build(RelationName::PsiForall, full, |x, y| t.elements().all(|z| left(x, y, z)));
    let agree = phi.matrix == phi_forall.matrix && psi.matrix == psi_forall.matrix;
    Ok(PhiPsi { phi, psi, phi_forall, psi_forall, agree })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Xyz {
    /// Common left idempotent identity, on `A*A`.
    pub x: Relation,
    /// Common right idempotent identity, on `A*A`.
    pub y: Relation,
    pub z: Relation,
}

pub fn relations_xyz(t: &CayleyTable) -> Result<Xyz> {
    t.require_associative()?;
    let c = t.products();
    let idem = t.idempotents();
    let x = Relation::build(RelationName::X, c.clone(), |a, b| {
        idem.iter().any(|&e| t.op(e, a) == a && t.op(e, b) == b)
    });
    let y = Relation::build(RelationName::Y, c.clone(), |a, b| {
        idem.iter().any(|&e| t.op(a, e) == a && t.op(b, e) == b)
    });
    let z = Relation::build(RelationName::Z, c, |a, b| x.related(a, b) && y.related(a, b));
    Ok(Xyz { x, y, z })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StarCondition {
    /// The disjunction; always true for a finite table.
    pub holds: bool,
    /// `bcA = bA` and `Abc = Ac` for all `b, c`.
    pub pointwise: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(Element, Element)>,
}

pub fn star_condition(t: &CayleyTable) -> Result<StarCondition> {
    t.require_associative()?;
    let n = t.order();
    let right_ideal = |b: Element| ElementSet::from_elements(n, t.row(b));
    let left_ideal = |c: Element| ElementSet::from_elements(n, t.elements().map(|x| t.op(x, c)));
    let witness = t.elements().flat_map(|b| t.elements().map(move |c| (b, c))).find(|&(b, c)| {
        let bc = t.op(b, c);
        right_ideal(bc) != right_ideal(b) || left_ideal(bc) != left_ideal(c)
    });
    Ok(StarCondition { holds: true, pointwise: witness.is_none(), witness })
}

/// Idempotents `e`, `f` whose product is not idempotent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IdempotentProduct {
    pub e: Element,
    pub f: Element,
    pub product: Element,
}

/// `Ok(None)` when every product of idempotents is idempotent.
pub fn idempotents_closed(t: &CayleyTable) -> Result<Option<IdempotentProduct>> {
    t.require_associative()?;
    let idem = t.idempotents();
    for &e in &idem {
        for &f in &idem {
            let product = t.op(e, f);
            if t.op(product, product) != product {
                return Ok(Some(IdempotentProduct { e, f, product }));
            }
        }
    }
    Ok(None)
}

/// `Ok(Some((x, f, y)))` when `xy != xfy` for an idempotent `f`.
pub fn idempotent_insertion_check(t: &CayleyTable) -> Result<Option<(Element, Element, Element)>> {
    t.require_associative()?;
    let idem = t.idempotents();
    for x in t.elements() {
        for &f in &idem {
            let xf = t.op(x, f);
            for y in t.elements() {
                if t.op(x, y) != t.op(xf, y) {
                    return Ok(Some((x, f, y)));
                }
            }
        }
    }
    Ok(None)
}

/// One cell `Z_{iλ}` of a rectangular band of groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub row: usize,
    pub col: usize,
    pub elements: Vec<Element>,
    pub identity: Element,
    /// Operation on positions within `elements`.
    pub group: CayleyTable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RectBandDecomposition {
    pub universe: ElementSet,
    /// `X`-classes.
    pub rows: Vec<Vec<Element>>,
    /// `Y`-classes.
    pub cols: Vec<Vec<Element>>,
    /// Row-major grid of cells.
    pub blocks: Vec<Block>,
    /// Cell coordinates of each element of the universe.
    coords: Vec<Option<(usize, usize)>>,
}

impl RectBandDecomposition {
    pub fn block(&self, row: usize, col: usize) -> &Block {
        &self.blocks[row * self.cols.len() + col]
    }

    pub fn coordinates(&self, x: Element) -> Option<(usize, usize)> {
        self.coords.get(x).copied().flatten()
    }

    /// `e_{iλ} e_{jμ} = e_{iμ}` for every pair of cells.
    pub fn identities_form_band(&self, t: &CayleyTable) -> bool {
        let (r, c) = (self.rows.len(), self.cols.len());
        (0..r).all(|i| {
            (0..c).all(|l| {
                (0..r).all(|j| {
                    (0..c).all(|m| t.op(self.block(i, l).identity, self.block(j, m).identity) == self.block(i, m).identity)
                })
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RectBandFailure {
    XNotEquivalence,
    YNotEquivalence,
    EmptyCell { row: usize, col: usize },
    NoIdentity { block: Vec<Element> },
    NotClosed { x: Element, y: Element, product: Element },
    NoInverse { element: Element },
    NotCommutative { x: Element, y: Element },
    OutsideCell { x: Element, y: Element, product: Element },
}

impl fmt::Display for RectBandFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RectBandFailure::XNotEquivalence => f.write_str("X is not an equivalence on A*A"),
            RectBandFailure::YNotEquivalence => f.write_str("Y is not an equivalence on A*A"),
            RectBandFailure::EmptyCell { row, col } => write!(f, "cell ({row},{col}) is empty"),
            RectBandFailure::NoIdentity { block } => write!(f, "block {block:?} has no idempotent identity"),
            RectBandFailure::NotClosed { x, y, product } => {
                write!(f, "block not closed: {x}*{y} = {product}")
            }
            RectBandFailure::NoInverse { element } => write!(f, "{element} has no inverse in its block"),
            RectBandFailure::NotCommutative { x, y } => write!(f, "block not commutative at ({x},{y})"),
            RectBandFailure::OutsideCell { x, y, product } => {
                write!(f, "{x}*{y} = {product} lies outside the expected cell")
            }
        }
    }
}

/// Detects `A*A` as a rectangular band of Abelian groups.
pub fn rect_band_of_abelian_groups(
    t: &CayleyTable,
) -> Result<std::result::Result<RectBandDecomposition, RectBandFailure>> {
    let xyz = relations_xyz(t)?;
    let Some(rows) = xyz.x.classes() else {
        return Ok(Err(RectBandFailure::XNotEquivalence));
    };
    let Some(cols) = xyz.y.classes() else {
        return Ok(Err(RectBandFailure::YNotEquivalence));
    };
    let n = t.order();
    let mut coords = vec![None; n];
    for (i, r) in rows.iter().enumerate() {
        for &x in r {
            let l = cols.iter().position(|c| c.contains(&x)).expect("X and Y share a domain");
            coords[x] = Some((i, l));
        }
    }
    let mut blocks = Vec::with_capacity(rows.len() * cols.len());
    for i in 0..rows.len() {
        for l in 0..cols.len() {
            let elements: Vec<Element> = (0..n).filter(|&x| coords[x] == Some((i, l))).collect();
            if elements.is_empty() {
                return Ok(Err(RectBandFailure::EmptyCell { row: i, col: l }));
            }
            match block_group(t, &elements) {
                Ok((identity, group)) => blocks.push(Block { row: i, col: l, elements, identity, group }),
                Err(f) => return Ok(Err(f)),
            }
        }
    }
    let universe = xyz.x.domain().clone();
    for x in universe.iter() {
        for y in universe.iter() {
            let (i, _) = coords[x].unwrap();
            let (_, m) = coords[y].unwrap();
            let product = t.op(x, y);
            if coords[product] != Some((i, m)) {
                return Ok(Err(RectBandFailure::OutsideCell { x, y, product }));
            }
        }
    }
    Ok(Ok(RectBandDecomposition { universe, rows, cols, blocks, coords }))
}

fn block_group(t: &CayleyTable, elements: &[Element]) -> std::result::Result<(Element, CayleyTable), RectBandFailure> {
    let pos = |v: Element| elements.iter().position(|&x| x == v);
    for &x in elements {
        for &y in elements {
            let product = t.op(x, y);
            if pos(product).is_none() {
                return Err(RectBandFailure::NotClosed { x, y, product });
            }
        }
    }
    let Some(e) = elements
        .iter()
        .copied()
        .find(|&e| elements.iter().all(|&x| t.op(e, x) == x && t.op(x, e) == x))
    else {
        return Err(RectBandFailure::NoIdentity { block: elements.to_vec() });
    };
    for &x in elements {
        if !elements.iter().any(|&y| t.op(x, y) == e && t.op(y, x) == e) {
            return Err(RectBandFailure::NoInverse { element: x });
        }
    }
    for &x in elements {
        for &y in elements {
            if t.op(x, y) != t.op(y, x) {
                return Err(RectBandFailure::NotCommutative { x, y });
            }
        }
    }
    let k = elements.len();
    let group = CayleyTable::from_fn(k, |a, b| pos(t.op(elements[a], elements[b])).unwrap())
        .expect("closed block");
    Ok((e, group))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fiber {
    pub base: Element,
    pub members: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InflationStructure {
    pub base: ElementSet,
    /// `rep[x]` is the base element whose fiber contains `x`.
    pub rep: Vec<Element>,
    pub fibers: Vec<Fiber>,
}

/// Views the table as an inflation of `A*A`, if possible.
///
/// `Ok(Err(x))` names an element not α-related to anything in `A*A`.
pub fn inflation_base(t: &CayleyTable) -> Result<std::result::Result<InflationStructure, Element>> {
    let alpha = relation_alpha(t)?;
    let base = t.products();
    let mut rep = Vec::with_capacity(t.order());
    for x in t.elements() {
        let r = if base.contains(x) {
            Some(x)
        } else {
            base.iter().find(|&b| alpha.related(x, b))
        };
        match r {
            Some(r) => rep.push(r),
            None => return Ok(Err(x)),
        }
    }
    for x in t.elements() {
        for y in t.elements() {
            if t.op(x, y) != t.op(rep[x], rep[y]) {
                return Err(Error::Verification(format!("inflation map fails at ({x},{y})")));
            }
        }
    }
    let fibers = base
        .iter()
        .map(|b| Fiber { base: b, members: t.elements().filter(|&x| rep[x] == b).collect() })
        .collect();
    Ok(Ok(InflationStructure { base, rep, fibers }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SemigroupFailure {
    IdempotentsNotClosed(IdempotentProduct),
    NotRectBand { failure: RectBandFailure },
    NotInflation { element: Element },
}

impl fmt::Display for SemigroupFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemigroupFailure::IdempotentsNotClosed(w) => write!(
                f,
                "idempotents not closed: {}*{} = {} is not idempotent",
                w.e, w.f, w.product
            ),
            SemigroupFailure::NotRectBand { failure } => {
                write!(f, "A*A is not a rectangular band of Abelian groups: {failure}")
            }
            SemigroupFailure::NotInflation { element } => {
                write!(f, "not an inflation of A*A: {element} is α-related to no product")
            }
        }
    }
}

/// `Ok(None)` when the semigroup is Abelian.
pub fn semigroup_abelian_witness(t: &CayleyTable) -> Result<Option<SemigroupFailure>> {
    if let Some(w) = idempotents_closed(t)? {
        return Ok(Some(SemigroupFailure::IdempotentsNotClosed(w)));
    }
    if let Err(failure) = rect_band_of_abelian_groups(t)? {
        return Ok(Some(SemigroupFailure::NotRectBand { failure }));
    }
    if let Err(element) = inflation_base(t)? {
        return Ok(Some(SemigroupFailure::NotInflation { element }));
    }
    Ok(None)
}

pub fn semigroup_abelian_fast(t: &CayleyTable) -> Result<bool> {
    Ok(semigroup_abelian_witness(t)?.is_none())
}

/// Finite Abelian semigroups are Hamiltonian; otherwise the oracle decides.
pub fn semigroup_hamiltonian_fast(t: &CayleyTable, limits: &Limits) -> Result<HamiltonianDecision> {
    if semigroup_abelian_fast(t)? {
        Ok(HamiltonianDecision::by_theorem(Route::SemigroupTheorem))
    } else {
        Ok(HamiltonianDecision::by_oracle(t, limits))
    }
}

/// `A*A ≅ H × I × J` with `H` an Abelian group, `I` left-zero, `J` right-zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HIJFactorization {
    pub h: CayleyTable,
    /// Elements of `A` forming `H`, by position.
    pub h_elements: Vec<Element>,
    pub i: CayleyTable,
    pub j: CayleyTable,
    /// `(c, (h, i, j))` for every `c` in `A*A`.
    pub map: Vec<(Element, (usize, usize, usize))>,
}

impl HIJFactorization {
    /// Position of `(h, i, j)` in the direct product `H × I × J`.
    pub fn product_index(&self, (h, i, j): (usize, usize, usize)) -> usize {
        (h * self.i.order() + i) * self.j.order() + j
    }

    pub fn product_table(&self, limits: &Limits) -> Result<CayleyTable> {
        self.h.direct_product(&self.i, limits)?.direct_product(&self.j, limits)
    }
}

/// Splits a rectangular band of Abelian groups with closed idempotents,
/// verifying the isomorphism on every product.
pub fn hij_factorization(
    t: &CayleyTable,
    d: &RectBandDecomposition,
    limits: &Limits,
) -> Result<HIJFactorization> {
    if let Some(w) = idempotents_closed(t)? {
        return Err(Error::Precondition(format!(
            "idempotents not closed: {}*{} = {}",
            w.e, w.f, w.product
        )));
    }
    let b0 = d.block(0, 0);
    let e = b0.identity;
    let (ni, nj) = (d.rows.len(), d.cols.len());
    let h = b0.group.clone();
    let i = leftzero(ni);
    let j = rightzero(nj);
    let mut map = Vec::with_capacity(d.universe.len());
    for c in d.universe.iter() {
        let proj = t.op(t.op(e, c), e);
        let hpos = b0
            .elements
            .iter()
            .position(|&x| x == proj)
            .ok_or_else(|| Error::Verification(format!("projection of {c} leaves H")))?;
        let (row, col) = d.coordinates(c).expect("universe element has a cell");
        map.push((c, (hpos, row, col)));
    }
    let f = HIJFactorization { h, h_elements: b0.elements.clone(), i, j, map };
    let prod = f.product_table(limits)?;
    if prod.order() != f.map.len() {
        return Err(Error::Verification("A*A and H×I×J differ in size".into()));
    }
    let mut image = vec![usize::MAX; t.order()];
    let mut hit = vec![false; prod.order()];
    for &(c, k) in &f.map {
        let idx = f.product_index(k);
        if std::mem::replace(&mut hit[idx], true) {
            return Err(Error::Verification("factor map is not injective".into()));
        }
        image[c] = idx;
    }
    for &(x, _) in &f.map {
        for &(y, _) in &f.map {
            if image[t.op(x, y)] != prod.op(image[x], image[y]) {
                return Err(Error::Verification(format!("factor map not multiplicative at ({x},{y})")));
            }
        }
    }
    Ok(f)
}

/// Everything the structure theory computes for one semigroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemigroupStructure {
    pub idempotents: Vec<Element>,
    pub products: ElementSet,
    pub alpha: Relation,
    pub phi_psi: PhiPsi,
    pub xyz: Xyz,
    pub star: StarCondition,
    pub idempotents_closed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rect_band: Option<RectBandDecomposition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rect_band_failure: Option<RectBandFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inflation: Option<InflationStructure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hij: Option<HIJFactorization>,
}

pub fn semigroup_structure(t: &CayleyTable, limits: &Limits) -> Result<SemigroupStructure> {
    t.require_associative()?;
    let closed = idempotents_closed(t)?.is_none();
    let (rect_band, rect_band_failure) = match rect_band_of_abelian_groups(t)? {
        Ok(d) => (Some(d), None),
        Err(f) => (None, Some(f)),
    };
    let hij = match &rect_band {
        Some(d) if closed => Some(hij_factorization(t, d, limits)?),
        _ => None,
    };
    Ok(SemigroupStructure {
        idempotents: t.idempotents(),
        products: t.products(),
        alpha: relation_alpha(t)?,
        phi_psi: relations_phi_psi(t)?,
        xyz: relations_xyz(t)?,
        star: star_condition(t)?,
        idempotents_closed: closed,
        rect_band,
        rect_band_failure,
        inflation: inflation_base(t)?.ok(),
        hij,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{band8_index, fixture, inflate, rect_band_product, zn};
    use crate::oracles::{abelian_oracle, Verdict};

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn alpha_examples() {
        let t = inflate(&zn(2), &[(0, 1)], &lim()).unwrap();
        assert_eq!(relation_alpha(&t).unwrap().classes().unwrap(), vec![vec![0, 2], vec![1]]);
        assert_eq!(relation_alpha(&zn(4)).unwrap().classes().unwrap().len(), 4);
        let b = fixture("band8").unwrap();
        assert_eq!(relation_alpha(&b).unwrap().classes().unwrap().len(), 8);
        assert!(matches!(relation_alpha(&fixture("q4a").unwrap()), Err(Error::NotAssociative(..))));
    }

    #[test]
    fn phi_psi_examples() {
        let r = relations_phi_psi(&leftzero(3)).unwrap();
        assert_eq!(r.phi.classes().unwrap().len(), 3);
        assert_eq!(r.psi.classes().unwrap(), vec![vec![0, 1, 2]]);
        assert!(r.agree);
        let r = relations_phi_psi(&zn(4)).unwrap();
        assert_eq!(r.phi.classes().unwrap().len(), 4);
        let r = relations_phi_psi(&rect_band_product(&zn(2), 2, 1, &lim()).unwrap()).unwrap();
        // Elements (h, i): Φ discrete, Ψ joins the two rows.
        assert_eq!(r.phi.classes().unwrap().len(), 4);
        assert_eq!(r.psi.classes().unwrap(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn xyz_examples() {
        let b = fixture("band8").unwrap();
        let r = relations_xyz(&b).unwrap();
        let z = r.z.classes().unwrap();
        assert_eq!(z, vec![vec![0, 1], vec![2, 3], vec![4, 5], vec![6, 7]]);
        assert_eq!(r.x.classes().unwrap(), vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]]);
        let r = relations_xyz(&zn(4)).unwrap();
        assert_eq!(r.z.classes().unwrap().len(), 1);
        let t = zn(2).direct_product(&leftzero(2), &lim()).unwrap();
        let r = relations_xyz(&t).unwrap();
        assert_eq!(r.x.classes().unwrap(), vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn star() {
        assert!(star_condition(&zn(4)).unwrap().pointwise);
        let t = inflate(&zn(2), &[(0, 1)], &lim()).unwrap();
        let s = star_condition(&t).unwrap();
        assert!(s.holds && s.pointwise);
        let s = star_condition(&leftzero(3)).unwrap();
        assert!(s.holds);
    }

    #[test]
    fn idempotent_products() {
        let b = fixture("band8").unwrap();
        let w = idempotents_closed(&b).unwrap().unwrap();
        assert_eq!(
            (w.e, w.f, w.product),
            (band8_index(0, 0, 0), band8_index(1, 1, 0), band8_index(0, 1, 1))
        );
        assert!(idempotents_closed(&rect_band_product(&zn(2), 2, 2, &lim()).unwrap()).unwrap().is_none());
        assert!(idempotents_closed(&zn(6)).unwrap().is_none());
        assert!(idempotent_insertion_check(&b).unwrap().is_some());
        assert!(idempotent_insertion_check(&zn(4)).unwrap().is_none());
        assert!(idempotent_insertion_check(&leftzero(3)).unwrap().is_none());
    }

    #[test]
    fn rect_bands() {
        let b = fixture("band8").unwrap();
        let d = rect_band_of_abelian_groups(&b).unwrap().unwrap();
        assert_eq!((d.rows.len(), d.cols.len()), (2, 2));
        assert!(d.blocks.iter().all(|k| k.group == zn(2)));
        assert!(!d.identities_form_band(&b));
        let d = rect_band_of_abelian_groups(&zn(4)).unwrap().unwrap();
        assert_eq!(d.blocks.len(), 1);
        let d = rect_band_of_abelian_groups(&leftzero(2)).unwrap().unwrap();
        assert_eq!((d.rows.len(), d.cols.len()), (2, 1));
        assert!(rect_band_of_abelian_groups(&fixture("s3").unwrap()).unwrap().is_err());
    }

    #[test]
    fn inflations() {
        let t = inflate(&zn(2), &[(0, 1)], &lim()).unwrap();
        let s = inflation_base(&t).unwrap().unwrap();
        assert_eq!(s.base.to_vec(), vec![0, 1]);
        assert_eq!(s.rep, vec![0, 1, 0]);
        let s = inflation_base(&zn(4)).unwrap().unwrap();
        assert_eq!(s.rep, vec![0, 1, 2, 3]);
        // Null semigroup with an extra layer: 2*2 = 1, everything else 0.
        let t = CayleyTable::new(vec![vec![0, 0, 0], vec![0, 0, 0], vec![0, 0, 1]]).unwrap();
        assert!(t.is_associative());
        assert_eq!(inflation_base(&t).unwrap(), Err(2));
    }

    #[test]
    fn abelian_fast_examples() {
        let b = fixture("band8").unwrap();
        let f = semigroup_abelian_witness(&b).unwrap().unwrap();
        assert!(f.to_string().starts_with("idempotents not closed"));
        let t = rect_band_product(&zn(3), 2, 2, &lim()).unwrap();
        assert!(semigroup_abelian_fast(&t).unwrap());
        assert_eq!(abelian_oracle(&t, &lim()), Verdict::Yes);
        let base = rect_band_product(&zn(2), 1, 2, &lim()).unwrap();
        let t = inflate(&base, &[(0, 2), (3, 1)], &lim()).unwrap();
        assert!(semigroup_abelian_fast(&t).unwrap());
        assert_eq!(abelian_oracle(&t, &lim()), Verdict::Yes);
    }

    #[test]
    fn hamiltonian_routes() {
        let h = semigroup_hamiltonian_fast(&leftzero(3), &lim()).unwrap();
        assert_eq!((h.route, h.verdict), (Route::SemigroupTheorem, Verdict::Yes));
        let h = semigroup_hamiltonian_fast(&fixture("s3").unwrap(), &lim()).unwrap();
        assert_eq!((h.route, h.verdict), (Route::Oracle, Verdict::No));
    }

    #[test]
    fn factorization() {
        let t = rect_band_product(&zn(2), 2, 3, &lim()).unwrap();
        let d = rect_band_of_abelian_groups(&t).unwrap().unwrap();
        let f = hij_factorization(&t, &d, &lim()).unwrap();
        assert_eq!((f.h.order(), f.i.order(), f.j.order()), (2, 2, 3));
        let d = rect_band_of_abelian_groups(&zn(4)).unwrap().unwrap();
        let f = hij_factorization(&zn(4), &d, &lim()).unwrap();
        assert_eq!((f.h.order(), f.i.order(), f.j.order()), (4, 1, 1));
        let b = fixture("band8").unwrap();
        let d = rect_band_of_abelian_groups(&b).unwrap().unwrap();
        assert!(matches!(hij_factorization(&b, &d, &lim()), Err(Error::Precondition(_))));
    }
}
