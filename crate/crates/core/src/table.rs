//! Finite binary operations given by their Cayley tables.
//!
//! Elements are the dense indices `0..n`. The table is stored row-major with
//! `entries[x][y] = x * y`, i.e. the row index is the left factor.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::set::ElementSet;

/// An element of a finite groupoid, identified by its index.
pub type Element = usize;

/// A finite groupoid `<{0..n}; *>`.
///
/// Immutable once built; every constructor validates closure.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CayleyTable {
    order: usize,
    entries: Vec<u32>,
    names: Option<Vec<String>>,
}

/// Summary of the basic structural predicates of a table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub order: usize,
    pub associative: bool,
    pub commutative: bool,
    pub identity: Option<Element>,
    pub quasigroup: bool,
    #[serde(rename = "loop")]
    pub is_loop: bool,
    pub group: bool,
    pub idempotents: Vec<Element>,
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    order: usize,
    entries: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

impl CayleyTable {
    /// Builds a table from its rows.
    pub fn new(rows: Vec<Vec<Element>>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::InvalidTable("order must be at least 1".into()));
        }
        let mut entries = Vec::with_capacity(order * order);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidTable(format!(
                    "row {x} has {} entries, expected {order}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= order {
                    return Err(Error::ElementOutOfRange { element: v, order });
                }
                entries.push(v as u32);
            }
        }
        Ok(Self {
            order,
            entries,
            names: None,
        })
    }

    /// Builds a table of the given order from a product function.
    pub fn from_fn(order: usize, mut op: impl FnMut(Element, Element) -> Element) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidTable("order must be at least 1".into()));
        }
        let mut entries = Vec::with_capacity(order * order);
        for x in 0..order {
            for y in 0..order {
                let v = op(x, y);
                if v >= order {
                    return Err(Error::ElementOutOfRange { element: v, order });
                }
                entries.push(v as u32);
            }
        }
        Ok(Self {
            order,
            entries,
            names: None,
        })
    }

    /// Attaches display names. Names never affect the operation.
    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.order {
            return Err(Error::InvalidTable(format!(
                "{} names given for order {}",
                names.len(),
                self.order
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display label of an element: its name if present, else its index.
    pub fn label(&self, x: Element) -> String {
        match &self.names {
            Some(names) => names[x].clone(),
            None => x.to_string(),
        }
    }

    /// The product `x * y`.
    #[inline]
    pub fn op(&self, x: Element, y: Element) -> Element {
        self.entries[x * self.order + y] as usize
    }

    pub fn row(&self, x: Element) -> impl Iterator<Item = Element> + '_ {
        self.entries[x * self.order..(x + 1) * self.order]
            .iter()
            .map(|&v| v as usize)
    }

    pub fn rows(&self) -> Vec<Vec<Element>> {
        (0..self.order).map(|x| self.row(x).collect()).collect()
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order
    }

    pub fn check_element(&self, x: Element) -> Result<()> {
        if x < self.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                element: x,
                order: self.order,
            })
        }
    }

    /// First triple `(x, y, z)` with `(xy)z != x(yz)`, scanning in index order.
    pub fn associativity_witness(&self) -> Option<(Element, Element, Element)> {
        for x in self.elements() {
            for y in self.elements() {
                let xy = self.op(x, y);
                for z in self.elements() {
                    if self.op(xy, z) != self.op(x, self.op(y, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_associative(&self) -> bool {
        self.associativity_witness().is_none()
    }

    /// Errors with the first non-associative triple.
    pub fn require_associative(&self) -> Result<()> {
        match self.associativity_witness() {
            None => Ok(()),
            Some((x, y, z)) => Err(Error::NotAssociative(x, y, z)),
        }
    }

    pub fn commutativity_witness(&self) -> Option<(Element, Element)> {
        for x in self.elements() {
            for y in x + 1..self.order {
                if self.op(x, y) != self.op(y, x) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_commutative(&self) -> bool {
        self.commutativity_witness().is_none()
    }

    /// The two-sided identity, if one exists. It is unique when it exists.
    pub fn identity_of(&self) -> Option<Element> {
        self.elements()
            .find(|&e| self.elements().all(|x| self.op(e, x) == x && self.op(x, e) == x))
    }

    fn row_is_permutation(&self, x: Element) -> bool {
        let mut seen = vec![false; self.order];
        self.row(x).all(|v| !std::mem::replace(&mut seen[v], true))
    }

    fn column_is_permutation(&self, y: Element) -> bool {
        let mut seen = vec![false; self.order];
        self.elements()
            .all(|x| !std::mem::replace(&mut seen[self.op(x, y)], true))
    }

    /// True iff the table is a Latin square.
    pub fn is_quasigroup(&self) -> bool {
        self.elements()
            .all(|x| self.row_is_permutation(x) && self.column_is_permutation(x))
    }

    pub fn require_quasigroup(&self) -> Result<()> {
        if self.is_quasigroup() {
            Ok(())
        } else {
            Err(Error::NotQuasigroup)
        }
    }

    pub fn idempotents(&self) -> Vec<Element> {
        self.elements().filter(|&x| self.op(x, x) == x).collect()
    }

    /// Left cancellation: `a*x = b` has at most one solution for all `a, b`.
    pub fn has_unique_division(&self) -> bool {
        self.elements().all(|x| self.row_is_permutation(x))
    }

    /// Right cancellation: `x*a = b` has at most one solution.
    pub fn has_unique_right_division(&self) -> bool {
        self.elements().all(|y| self.column_is_permutation(y))
    }

    /// The set `A*A` of all products.
    pub fn products(&self) -> ElementSet {
        ElementSet::from_elements(self.order, self.entries.iter().map(|&v| v as usize))
    }

    /// `a^k` with left-associated powers, `k >= 1`.
    pub fn power(&self, a: Element, k: usize) -> Element {
        assert!(k >= 1, "powers start at 1");
        (1..k).fold(a, |acc, _| self.op(acc, a))
    }

    pub fn classify(&self) -> ClassificationReport {
        let associative = self.is_associative();
        let identity = self.identity_of();
        let quasigroup = self.is_quasigroup();
        let is_loop = quasigroup && identity.is_some();
        ClassificationReport {
            order: self.order,
            associative,
            commutative: self.is_commutative(),
            identity,
            quasigroup,
            is_loop,
            group: is_loop && associative,
            idempotents: self.idempotents(),
        }
    }

    /// Direct product with coordinatewise operation. The pair `(x, y)` gets
    /// index `x * other.order + y`.
    pub fn direct_product(&self, other: &CayleyTable, limits: &Limits) -> Result<CayleyTable> {
        let m = other.order;
        let order = self
            .order
            .checked_mul(m)
            .filter(|&o| o <= limits.max_order)
            .ok_or(Error::CapExceeded {
                what: "product order",
                limit: limits.max_order,
                actual: self.order.saturating_mul(m),
            })?;
        let mut t = CayleyTable::from_fn(order, |p, q| {
            let (x1, y1) = (p / m, p % m);
            let (x2, y2) = (q / m, q % m);
            self.op(x1, x2) * m + other.op(y1, y2)
        })?;
        if self.names.is_some() || other.names.is_some() {
            let names = (0..order)
                .map(|p| format!("({},{})", self.label(p / m), other.label(p % m)))
                .collect();
            t.names = Some(names);
        }
        Ok(t)
    }

    /// Sub-table on a closed subset, re-indexed in ascending element order.
    pub fn restrict(&self, subset: &ElementSet) -> Result<CayleyTable> {
        let elems = subset.to_vec();
        if elems.is_empty() {
            return Err(Error::InvalidTable("cannot restrict to the empty set".into()));
        }
        let mut index = vec![usize::MAX; self.order];
        for (k, &x) in elems.iter().enumerate() {
            index[x] = k;
        }
        for &x in &elems {
            for &y in &elems {
                let v = self.op(x, y);
                if index[v] == usize::MAX {
                    return Err(Error::NotClosed(x, y, v));
                }
            }
        }
        let t = CayleyTable::from_fn(elems.len(), |p, q| index[self.op(elems[p], elems[q])])?;
        match &self.names {
            Some(names) => t.with_names(elems.iter().map(|&x| names[x].clone()).collect()),
            None => Ok(t),
        }
    }

    /// Canonical text serialization: order line, one line per row with single
    /// spaces, an optional `@names` line, LF line ends.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for x in self.elements() {
            let row: Vec<String> = self.row(x).map(|v| v.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        if let Some(names) = &self.names {
            out.push_str("@names ");
            out.push_str(&names.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&JsonTable {
            order: self.order,
            entries: self.rows(),
            names: self.names.clone(),
        })
        .expect("table serialization cannot fail")
    }

    /// Hex SHA-256 of the canonical text form.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_text().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl Serialize for CayleyTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JsonTable {
            order: self.order,
            entries: self.rows(),
            names: self.names.clone(),
        }
        .serialize(s)
    }
}

impl fmt::Debug for CayleyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CayleyTable(order {}) ", self.order)?;
        f.debug_list().entries(self.rows()).finish()
    }
}

impl fmt::Display for CayleyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Parses a table in either the text or the JSON format, with default caps.
pub fn parse_table(text: &str) -> Result<CayleyTable> {
    parse_table_with(text, &Limits::default())
}

/// Parses a table in either the text or the JSON format. JSON is recognized
/// by a leading `{`.
pub fn parse_table_with(text: &str, limits: &Limits) -> Result<CayleyTable> {
    if text.trim_start().starts_with('{') {
        parse_json(text, limits)
    } else {
        parse_text(text, limits)
    }
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens of a line with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (line[..byte].chars().count() + 1, tok))
        .collect()
}

fn parse_text(text: &str, limits: &Limits) -> Result<CayleyTable> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| parse_error(1, 1, "missing order header"))?;
    let header_tokens = tokens(header);
    if header_tokens.len() != 1 {
        return Err(parse_error(
            header_line,
            1,
            "header must be a single integer (the order)",
        ));
    }
    let (col, tok) = header_tokens[0];
    let order: usize = tok
        .parse()
        .map_err(|_| parse_error(header_line, col, format!("malformed order `{tok}`")))?;
    if order == 0 {
        return Err(parse_error(header_line, col, "order must be at least 1"));
    }
    if order > limits.max_order {
        return Err(parse_error(
            header_line,
            col,
            format!("order {order} exceeds cap {}", limits.max_order),
        ));
    }

    let mut rows = Vec::with_capacity(order);
    let mut names = None;
    let mut last_line = header_line;
    for (line_no, line) in lines {
        last_line = line_no;
        let toks = tokens(line);
        if toks[0].1 == "@names" {
            if rows.len() != order {
                return Err(parse_error(
                    line_no,
                    1,
                    format!("expected {order} rows before @names, found {}", rows.len()),
                ));
            }
            if names.is_some() {
                return Err(parse_error(line_no, 1, "duplicate @names line"));
            }
            let list: Vec<String> = toks[1..].iter().map(|(_, t)| t.to_string()).collect();
            if list.len() != order {
                return Err(parse_error(
                    line_no,
                    1,
                    format!("@names lists {} names, expected {order}", list.len()),
                ));
            }
            names = Some(list);
            continue;
        }
        if rows.len() == order || names.is_some() {
            return Err(parse_error(
                line_no,
                1,
                format!("unexpected content after {order} rows"),
            ));
        }
        if toks.len() != order {
            return Err(parse_error(
                line_no,
                toks.get(order).map_or(1, |t| t.0),
                format!("row has {} entries, expected {order}", toks.len()),
            ));
        }
        let mut row = Vec::with_capacity(order);
        for (col, tok) in toks {
            let v: usize = tok
                .parse()
                .map_err(|_| parse_error(line_no, col, format!("non-integer entry `{tok}`")))?;
            if v >= order {
                return Err(parse_error(
                    line_no,
                    col,
                    format!("entry {v} out of range for order {order}"),
                ));
            }
            row.push(v);
        }
        rows.push(row);
    }
    if rows.len() != order {
        return Err(parse_error(
            last_line + 1,
            1,
            format!("expected {order} rows, found {}", rows.len()),
        ));
    }
    let t = CayleyTable::new(rows)?;
    match names {
        Some(n) => t.with_names(n),
        None => Ok(t),
    }
}

fn parse_json(text: &str, limits: &Limits) -> Result<CayleyTable> {
    let raw: JsonTable = serde_json::from_str(text)
        .map_err(|e| parse_error(e.line(), e.column(), e.to_string()))?;
    if raw.order > limits.max_order {
        return Err(Error::CapExceeded {
            what: "table order",
            limit: limits.max_order,
            actual: raw.order,
        });
    }
    if raw.entries.len() != raw.order {
        return Err(Error::InvalidTable(format!(
            "order {} but {} rows",
            raw.order,
            raw.entries.len()
        )));
    }
    let t = CayleyTable::new(raw.entries)?;
    match raw.names {
        Some(n) => t.with_names(n),
        None => Ok(t),
    }
}
