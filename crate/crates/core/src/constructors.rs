//! Fixtures and parameterized families of tables.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::perm::Permutation;
use crate::table::{CayleyTable, Element};

/// Addition modulo `n`.
pub fn zn(n: usize) -> CayleyTable {
    assert!(n >= 1, "zn needs n >= 1");
    CayleyTable::from_fn(n, |x, y| (x + y) % n).expect("closed")
}

/// Direct product of cyclic groups, factors in the given order.
pub fn abelian_product(ns: &[usize], limits: &Limits) -> Result<CayleyTable> {
    let mut acc = zn(1);
    for &n in ns {
        if n == 0 {
            return Err(Error::InvalidSpec("cyclic factor of order 0".into()));
        }
        acc = acc.direct_product(&zn(n), limits)?;
    }
    Ok(acc)
}

/// `x*y = x`.
pub fn leftzero(n: usize) -> CayleyTable {
    assert!(n >= 1, "leftzero needs n >= 1");
    CayleyTable::from_fn(n, |x, _| x).expect("closed")
}

/// `x*y = y`.
pub fn rightzero(n: usize) -> CayleyTable {
    assert!(n >= 1, "rightzero needs n >= 1");
    CayleyTable::from_fn(n, |_, y| y).expect("closed")
}

fn require_abelian_group(g: &CayleyTable) -> Result<Element> {
    let c = g.classify();
    match c.identity {
        Some(e) if c.group && c.commutative => Ok(e),
        _ => Err(Error::Precondition("expected an Abelian group table".into())),
    }
}

/// `H x leftzero(rows) x rightzero(cols)`: a rectangular band of copies of
/// the Abelian group `H` whose idempotents multiply to idempotents.
///
/// The element `(h, i, j)` has index `(h * rows + i) * cols + j`.
pub fn rect_band_product(
    h: &CayleyTable,
    rows: usize,
    cols: usize,
    limits: &Limits,
) -> Result<CayleyTable> {
    require_abelian_group(h)?;
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidSpec("band dimensions must be positive".into()));
    }
    h.direct_product(&leftzero(rows), limits)?
        .direct_product(&rightzero(cols), limits)
}

/// Inflation of `base`: for each `(b, k)` in `fibers`, adds `k` new elements
/// that multiply exactly like `b`. New elements are appended in the order
/// given. Returns the table and the representative map.
pub fn inflate_with_map(
    base: &CayleyTable,
    fibers: &[(Element, usize)],
    limits: &Limits,
) -> Result<(CayleyTable, Vec<Element>)> {
    let mut rep: Vec<Element> = base.elements().collect();
    for &(b, k) in fibers {
        base.check_element(b)?;
        rep.extend(std::iter::repeat_n(b, k));
    }
    if rep.len() > limits.max_order {
        return Err(Error::CapExceeded {
            what: "inflation order",
            limit: limits.max_order,
            actual: rep.len(),
        });
    }
    let t = CayleyTable::from_fn(rep.len(), |x, y| base.op(rep[x], rep[y]))?;
    Ok((t, rep))
}

pub fn inflate(base: &CayleyTable, fibers: &[(Element, usize)], limits: &Limits) -> Result<CayleyTable> {
    inflate_with_map(base, fibers, limits).map(|(t, _)| t)
}

/// `k*x = x + ... + x` in an Abelian group with identity `zero`.
pub fn multiple(g: &CayleyTable, zero: Element, k: usize, x: Element) -> Element {
    (0..k).fold(zero, |acc, _| g.op(acc, x))
}

/// The map `x -> k*x` on an Abelian group, if it is a bijection.
pub fn multiplier(g: &CayleyTable, k: usize) -> Result<Permutation> {
    let zero = require_abelian_group(g)?;
    Permutation::from_images(g.elements().map(|x| multiple(g, zero, k, x)).collect())
        .ok_or_else(|| Error::Precondition(format!("x -> {k}x is not a bijection")))
}

/// The quasigroup `x*y = phi(x) + psi(y) + c` over an Abelian group.
pub fn linear_quasigroup(
    g: &CayleyTable,
    phi: &Permutation,
    psi: &Permutation,
    c: Element,
) -> Result<CayleyTable> {
    require_abelian_group(g)?;
    g.check_element(c)?;
    for (name, p) in [("phi", phi), ("psi", psi)] {
        if !p.is_automorphism_of(g) {
            return Err(Error::Precondition(format!(
                "{name} is not an automorphism of the group"
            )));
        }
    }
    CayleyTable::from_fn(g.order(), |x, y| g.op(g.op(phi.apply(x), psi.apply(y)), c))
}

/// Symmetric group on three points; index 0 is the identity, elements are
/// the permutations in lexicographic order, `x*y = x ∘ y`.
pub fn s3() -> CayleyTable {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    CayleyTable::from_fn(6, |x, y| {
        let comp = [0, 1, 2].map(|i| perms[x][perms[y][i]]);
        perms.iter().position(|p| *p == comp).expect("closed")
    })
    .expect("closed")
}

/// Quaternion group. Index `2u + s` is `(-1)^s · u` with units
/// `u = 1, i, j, k`.
pub fn q8() -> CayleyTable {
    // unit products as (sign, unit)
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    CayleyTable::from_fn(8, |x, y| {
        let (ux, sx) = (x / 2, x % 2);
        let (uy, sy) = (y / 2, y % 2);
        let (s, u) = UNIT[ux][uy];
        2 * u + (s + sx + sy) % 2
    })
    .expect("closed")
    .with_names(
        ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .map(String::from)
            .to_vec(),
    )
    .expect("eight names")
}

/// Index of the element `ε̄_{iλ}` of the eight-element rectangular band of
/// `Z2` copies.
pub fn band8_index(i: usize, lambda: usize, eps: usize) -> Element {
    4 * i + 2 * lambda + eps
}

fn band8() -> Result<CayleyTable> {
    let t = CayleyTable::from_fn(8, |x, y| {
        let (i, lambda, eps) = (x / 4, (x / 2) % 2, x % 2);
        let (j, mu, delta) = (y / 4, (y / 2) % 2, y % 2);
        let twist = usize::from(i != j && lambda != mu);
        band8_index(i, mu, (eps + delta + twist) % 2)
    })?;
    t.require_associative()?;
    let names = (0..8)
        .map(|x| format!("{}_{}{}", x % 2, x / 4, (x / 2) % 2))
        .collect();
    t.with_names(names)
}

/// Named tables:
///
/// * `q4a`, `q4b`: the two order-4 quasigroups used as counterexamples.
/// * `band8`: the 2x2 rectangular band of `Z2` copies with twisted
///   off-diagonal products, `ε̄_{iλ}·δ̄_{jμ} = (ε+δ+[i≠j ∧ λ≠μ])_{iμ}`.
///   Element `ε̄_{iλ}` has index `4i + 2λ + ε`. Associativity is checked
///   when the table is built.
/// * `s3`, `q8`: the symmetric group of degree 3 and the quaternion group.
pub fn fixture(name: &str) -> Result<CayleyTable> {
    match name {
        "q4a" => CayleyTable::new(vec![
            vec![1, 3, 2, 0],
            vec![2, 0, 3, 1],
            vec![0, 2, 1, 3],
            vec![3, 1, 0, 2],
        ]),
        "q4b" => CayleyTable::new(vec![
            vec![1, 0, 3, 2],
            vec![2, 1, 0, 3],
            vec![0, 3, 2, 1],
            vec![3, 2, 1, 0],
        ]),
        "band8" => band8(),
        "s3" => Ok(s3()),
        "q8" => Ok(q8()),
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}

pub const FIXTURES: [&str; 5] = ["q4a", "q4b", "band8", "s3", "q8"];

const RANDOM_SEMIGROUP_CAP: usize = 8;
const RANDOM_LATIN_CAP: usize = 32;

/// A seeded random associative table found by randomized backtracking.
///
/// Cells are filled row by row with candidate values in random order; any
/// assignment that closes a non-associative triple is undone, and a search
/// that runs too long restarts. The distribution is not uniform, but the
/// output is a pure function of `(n, seed)`.
pub fn random_semigroup(n: usize, seed: u64) -> Result<CayleyTable> {
    if n == 0 || n > RANDOM_SEMIGROUP_CAP {
        return Err(Error::CapExceeded {
            what: "random semigroup order",
            limit: RANDOM_SEMIGROUP_CAP,
            actual: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let cells: Vec<usize> = (0..n * n).collect();
        let mut partial = vec![None; n * n];
        let mut budget = 500usize;
        if fill_associative(n, &cells, 0, &mut partial, &mut rng, &mut budget) {
            let entries: Vec<usize> = partial.into_iter().map(|v| v.expect("filled")).collect();
            return CayleyTable::from_fn(n, |x, y| entries[x * n + y]);
        }
    }
}

fn fill_associative(
    n: usize,
    cells: &[usize],
    k: usize,
    partial: &mut [Option<usize>],
    rng: &mut ChaCha8Rng,
    budget: &mut usize,
) -> bool {
    if k == cells.len() {
        return true;
    }
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    let cell = cells[k];
    let mut values: Vec<usize> = (0..n).collect();
    values.shuffle(rng);
    for v in values {
        partial[cell] = Some(v);
        if partial_associative(n, partial, cell) && fill_associative(n, cells, k + 1, partial, rng, budget)
        {
            return true;
        }
    }
    partial[cell] = None;
    false
}

/// Checks the triples whose evaluation reads `cell`; all others were
/// consistent before it was set.
fn partial_associative(n: usize, p: &[Option<usize>], cell: usize) -> bool {
    let get = |x: usize, y: usize| p[x * n + y];
    let (a, b) = (cell / n, cell % n);
    let v = p[cell].expect("cell just set");
    let agree = |l: Option<usize>, r: Option<usize>| !matches!((l, r), (Some(l), Some(r)) if l != r);
    for w in 0..n {
        // (a*b)*w = a*(b*w)
        if !agree(get(v, w), get(b, w).and_then(|bw| get(a, bw))) {
            return false;
        }
        // (w*a)*b = w*(a*b)
        if !agree(get(w, a).and_then(|wa| get(wa, b)), get(w, v)) {
            return false;
        }
        for y in 0..n {
            // (w*y)*b with w*y = a
            if get(w, y) == Some(a) && !agree(Some(v), get(y, b).and_then(|yb| get(w, yb))) {
                return false;
            }
            // a*(y*w) with y*w = b
            if get(y, w) == Some(b) && !agree(get(a, y).and_then(|ay| get(ay, w)), Some(v)) {
                return false;
            }
        }
    }
    true
}

/// A seeded random Latin square, built row by row with backtracking.
pub fn random_latin_square(n: usize, seed: u64) -> Result<CayleyTable> {
    if n == 0 || n > RANDOM_LATIN_CAP {
        return Err(Error::CapExceeded {
            what: "random Latin square order",
            limit: RANDOM_LATIN_CAP,
            actual: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut grid = vec![usize::MAX; n * n];
        let mut budget = 50_000usize;
        if fill_latin(n, 0, &mut grid, &mut rng, &mut budget) {
            return CayleyTable::from_fn(n, |x, y| grid[x * n + y]);
        }
    }
}

fn fill_latin(
    n: usize,
    cell: usize,
    grid: &mut [usize],
    rng: &mut ChaCha8Rng,
    budget: &mut usize,
) -> bool {
    if cell == n * n {
        return true;
    }
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    let (r, c) = (cell / n, cell % n);
    let mut values: Vec<usize> = (0..n)
        .filter(|&v| (0..c).all(|k| grid[r * n + k] != v) && (0..r).all(|k| grid[k * n + c] != v))
        .collect();
    values.shuffle(rng);
    for v in values {
        grid[cell] = v;
        if fill_latin(n, cell + 1, grid, rng, budget) {
            return true;
        }
    }
    grid[cell] = usize::MAX;
    false
}

/// A seeded random table with identity element 0.
pub fn random_identity_groupoid(n: usize, seed: u64) -> Result<CayleyTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CayleyTable::from_fn(n, |x, y| match (x, y) {
        (0, y) => y,
        (x, 0) => x,
        _ => rng.random_range(0..n),
    })
}

/// A seeded random table with independent uniform entries.
pub fn random_table(n: usize, seed: u64) -> Result<CayleyTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CayleyTable::from_fn(n, |_, _| rng.random_range(0..n))
}

/// A seeded random member of `class`.
pub fn random_in_class(class: TableClass, n: usize, seed: u64) -> Result<CayleyTable> {
    match class {
        TableClass::Groupoid => random_table(n, seed),
        TableClass::Semigroup => random_semigroup(n, seed),
        TableClass::Quasigroup => random_latin_square(n, seed),
        TableClass::Identity => random_identity_groupoid(n, seed),
    }
}

/// Filters for exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableClass {
    Groupoid,
    Semigroup,
    Quasigroup,
    /// Groupoids with a two-sided identity.
    Identity,
}

impl TableClass {
    pub fn admits(self, t: &CayleyTable) -> bool {
        match self {
            TableClass::Groupoid => true,
            TableClass::Semigroup => t.is_associative(),
            TableClass::Quasigroup => t.is_quasigroup(),
            TableClass::Identity => t.identity_of().is_some(),
        }
    }

    /// Largest order that [`enumerate_tables`] will scan exhaustively.
    pub fn exhaustive_cap(self) -> usize {
        match self {
            TableClass::Quasigroup => 4,
            _ => 3,
        }
    }
}

impl std::str::FromStr for TableClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "groupoid" => Ok(TableClass::Groupoid),
            "semigroup" | "associative" => Ok(TableClass::Semigroup),
            "quasigroup" | "latin" => Ok(TableClass::Quasigroup),
            "identity" | "identity-groupoid" => Ok(TableClass::Identity),
            other => Err(Error::InvalidSpec(format!("unknown class `{other}`"))),
        }
    }
}

impl fmt::Display for TableClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableClass::Groupoid => "groupoid",
            TableClass::Semigroup => "semigroup",
            TableClass::Quasigroup => "quasigroup",
            TableClass::Identity => "identity",
        })
    }
}

/// Streams every table of order `n` in `class`, in lexicographic order of
/// the row-major entry vector.
///
/// All `n^(n^2)` tables are scanned for `n <= 3`; quasigroups are produced
/// directly as Latin squares up to order 4.
pub fn enumerate_tables(
    n: usize,
    class: TableClass,
    mut visitor: impl FnMut(&CayleyTable),
) -> Result<()> {
    if n == 0 || n > class.exhaustive_cap() {
        return Err(Error::CapExceeded {
            what: "exhaustive enumeration order",
            limit: class.exhaustive_cap(),
            actual: n,
        });
    }
    if class == TableClass::Quasigroup {
        let mut grid = vec![usize::MAX; n * n];
        enumerate_latin(n, 0, &mut grid, &mut visitor);
        return Ok(());
    }
    let cells = n * n;
    let mut digits = vec![0usize; cells];
    loop {
        let t = CayleyTable::from_fn(n, |x, y| digits[x * n + y])?;
        if class.admits(&t) {
            visitor(&t);
        }
        // increment, last cell fastest
        let mut k = cells;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < n {
                break;
            }
            digits[k] = 0;
        }
    }
}

fn enumerate_latin(n: usize, cell: usize, grid: &mut [usize], visitor: &mut impl FnMut(&CayleyTable)) {
    if cell == n * n {
        let t = CayleyTable::from_fn(n, |x, y| grid[x * n + y]).expect("closed");
        visitor(&t);
        return;
    }
    let (r, c) = (cell / n, cell % n);
    for v in 0..n {
        if (0..c).all(|k| grid[r * n + k] != v) && (0..r).all(|k| grid[k * n + c] != v) {
            grid[cell] = v;
            enumerate_latin(n, cell + 1, grid, visitor);
        }
    }
    grid[cell] = usize::MAX;
}

/// Collects [`enumerate_tables`] into a vector.
pub fn all_tables(n: usize, class: TableClass) -> Result<Vec<CayleyTable>> {
    let mut out = Vec::new();
    enumerate_tables(n, class, |t| out.push(t.clone()))?;
    Ok(out)
}

/// An endomorphism argument of `linearq`: a multiplier `x -> kx` or an
/// explicit image list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapSpec {
    Multiplier(usize),
    Images(Vec<Element>),
}

impl MapSpec {
    fn resolve(&self, g: &CayleyTable) -> Result<Permutation> {
        match self {
            MapSpec::Multiplier(k) => multiplier(g, *k),
            MapSpec::Images(images) => Permutation::from_images(images.clone())
                .filter(|p| p.len() == g.order())
                .ok_or_else(|| Error::Precondition("map is not a permutation of the group".into())),
        }
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::Multiplier(k) => write!(f, "{k}"),
            MapSpec::Images(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

/// A recipe for a table, written as a small expression such as
/// `rectband(zn(2),2,2)` or `inflate(zn(2),0=1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    Zn { n: usize },
    AbelianProduct { factors: Vec<usize> },
    Leftzero { n: usize },
    Rightzero { n: usize },
    Rectband { group: Box<GeneratorSpec>, rows: usize, cols: usize },
    Inflate { base: Box<GeneratorSpec>, fibers: Vec<(Element, usize)> },
    Linearq { group: Box<GeneratorSpec>, phi: MapSpec, psi: MapSpec, c: Element },
    Product { left: Box<GeneratorSpec>, right: Box<GeneratorSpec> },
    Fixture { name: String },
    RandomSemigroup { n: usize, seed: u64 },
    RandomLatin { n: usize, seed: u64 },
}

impl GeneratorSpec {
    pub fn build(&self, limits: &Limits) -> Result<CayleyTable> {
        let check = |n: usize| {
            if n == 0 || n > limits.max_order {
                Err(Error::CapExceeded {
                    what: "generated order",
                    limit: limits.max_order,
                    actual: n,
                })
            } else {
                Ok(n)
            }
        };
        match self {
            GeneratorSpec::Zn { n } => Ok(zn(check(*n)?)),
            GeneratorSpec::AbelianProduct { factors } => abelian_product(factors, limits),
            GeneratorSpec::Leftzero { n } => Ok(leftzero(check(*n)?)),
            GeneratorSpec::Rightzero { n } => Ok(rightzero(check(*n)?)),
            GeneratorSpec::Rectband { group, rows, cols } => {
                rect_band_product(&group.build(limits)?, *rows, *cols, limits)
            }
            GeneratorSpec::Inflate { base, fibers } => inflate(&base.build(limits)?, fibers, limits),
            GeneratorSpec::Linearq { group, phi, psi, c } => {
                let g = group.build(limits)?;
                linear_quasigroup(&g, &phi.resolve(&g)?, &psi.resolve(&g)?, *c)
            }
            GeneratorSpec::Product { left, right } => {
                left.build(limits)?.direct_product(&right.build(limits)?, limits)
            }
            GeneratorSpec::Fixture { name } => fixture(name),
            GeneratorSpec::RandomSemigroup { n, seed } => random_semigroup(check(*n)?, *seed),
            GeneratorSpec::RandomLatin { n, seed } => random_latin_square(check(*n)?, *seed),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut p = SpecParser {
            src: text.as_bytes(),
            pos: 0,
        };
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(spec)
    }
}

impl std::str::FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GeneratorSpec::parse(s)
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Zn { n } => write!(f, "zn({n})"),
            GeneratorSpec::AbelianProduct { factors } => {
                let parts: Vec<String> = factors.iter().map(|x| x.to_string()).collect();
                write!(f, "abelian-product({})", parts.join(","))
            }
            GeneratorSpec::Leftzero { n } => write!(f, "leftzero({n})"),
            GeneratorSpec::Rightzero { n } => write!(f, "rightzero({n})"),
            GeneratorSpec::Rectband { group, rows, cols } => {
                write!(f, "rectband({group},{rows},{cols})")
            }
            GeneratorSpec::Inflate { base, fibers } => {
                write!(f, "inflate({base}")?;
                for (b, k) in fibers {
                    write!(f, ",{b}={k}")?;
                }
                write!(f, ")")
            }
            GeneratorSpec::Linearq { group, phi, psi, c } => {
                write!(f, "linearq({group},{phi},{psi},{c})")
            }
            GeneratorSpec::Product { left, right } => write!(f, "product({left},{right})"),
            GeneratorSpec::Fixture { name } => write!(f, "{name}"),
            GeneratorSpec::RandomSemigroup { n, seed } => write!(f, "random-semigroup({n},{seed})"),
            GeneratorSpec::RandomLatin { n, seed } => write!(f, "random-latin({n},{seed})"),
        }
    }
}

enum Arg {
    Int(u64),
    List(Vec<usize>),
    Pair(usize, usize),
    Spec(GeneratorSpec),
}

struct SpecParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl SpecParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::InvalidSpec(format!("{msg} at offset {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'-')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a name"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.error("expected an integer"))
    }

    fn arg(&mut self) -> Result<Arg> {
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let mut items = Vec::new();
                if !self.eat(b']') {
                    loop {
                        items.push(self.int()? as usize);
                        if self.eat(b']') {
                            break;
                        }
                        self.expect(b',')?;
                    }
                }
                Ok(Arg::List(items))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.int()?;
                if self.eat(b'=') {
                    Ok(Arg::Pair(v as usize, self.int()? as usize))
                } else {
                    Ok(Arg::Int(v))
                }
            }
            _ => Ok(Arg::Spec(self.spec()?)),
        }
    }

    fn spec(&mut self) -> Result<GeneratorSpec> {
        let name = self.ident()?;
        let mut args = Vec::new();
        if self.eat(b'(') && !self.eat(b')') {
            loop {
                args.push(self.arg()?);
                if self.eat(b')') {
                    break;
                }
                self.expect(b',')?;
            }
        }
        let bad = || Error::InvalidSpec(format!("bad arguments for `{name}`"));
        let int = |a: &Arg| match a {
            Arg::Int(v) => Ok(*v),
            _ => Err(bad()),
        };
        let spec = |a: Arg| match a {
            Arg::Spec(s) => Ok(Box::new(s)),
            _ => Err(bad()),
        };
        let map = |a: &Arg| match a {
            Arg::Int(k) => Ok(MapSpec::Multiplier(*k as usize)),
            Arg::List(v) => Ok(MapSpec::Images(v.clone())),
            _ => Err(bad()),
        };
        let one_int = |args: &[Arg]| match args {
            [a] => int(a).map(|v| v as usize),
            _ => Err(bad()),
        };
        let two_ints = |args: &[Arg]| match args {
            [a, b] => Ok((int(a)? as usize, int(b)?)),
            _ => Err(bad()),
        };
        Ok(match name.as_str() {
            "zn" => GeneratorSpec::Zn { n: one_int(&args)? },
            "abelian-product" => GeneratorSpec::AbelianProduct {
                factors: args.iter().map(|a| int(a).map(|v| v as usize)).collect::<Result<_>>()?,
            },
            "leftzero" => GeneratorSpec::Leftzero { n: one_int(&args)? },
            "rightzero" => GeneratorSpec::Rightzero { n: one_int(&args)? },
            "rectband" => {
                if args.len() != 3 {
                    return Err(bad());
                }
                let rows = int(&args[1])? as usize;
                let cols = int(&args[2])? as usize;
                let group = spec(args.into_iter().next().expect("three args"))?;
                GeneratorSpec::Rectband { group, rows, cols }
            }
            "inflate" => {
                let mut it = args.into_iter();
                let base = spec(it.next().ok_or_else(bad)?)?;
                let fibers = it
                    .map(|a| match a {
                        Arg::Pair(b, k) => Ok((b, k)),
                        _ => Err(bad()),
                    })
                    .collect::<Result<_>>()?;
                GeneratorSpec::Inflate { base, fibers }
            }
            "linearq" => {
                if args.len() != 4 {
                    return Err(bad());
                }
                let phi = map(&args[1])?;
                let psi = map(&args[2])?;
                let c = int(&args[3])? as usize;
                let group = spec(args.into_iter().next().expect("four args"))?;
                GeneratorSpec::Linearq { group, phi, psi, c }
            }
            "product" => {
                let mut it = args.into_iter();
                let (Some(l), Some(r), None) = (it.next(), it.next(), it.next()) else {
                    return Err(bad());
                };
                GeneratorSpec::Product {
                    left: spec(l)?,
                    right: spec(r)?,
                }
            }
            "fixture" => match args.as_slice() {
                [Arg::Spec(GeneratorSpec::Fixture { name })] => GeneratorSpec::Fixture { name: name.clone() },
                _ => return Err(bad()),
            },
            "random-semigroup" => {
                let (n, seed) = two_ints(&args)?;
                GeneratorSpec::RandomSemigroup { n, seed }
            }
            "random-latin" => {
                let (n, seed) = two_ints(&args)?;
                GeneratorSpec::RandomLatin { n, seed }
            }
            fixture if args.is_empty() => GeneratorSpec::Fixture {
                name: fixture.to_string(),
            },
            other => return Err(Error::InvalidSpec(format!("unknown generator `{other}`"))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups() {
        assert_eq!(zn(4).row(0).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert_eq!(zn(1).order(), 1);
        let k4 = abelian_product(&[2, 2], &Limits::default()).unwrap();
        assert!(k4.classify().group);
        assert!(k4.elements().all(|x| k4.op(x, x) == 0));
    }

    #[test]
    fn zero_semigroups() {
        assert_eq!(leftzero(2).rows(), vec![vec![0, 0], vec![1, 1]]);
        assert_eq!(rightzero(2).rows(), vec![vec![0, 1], vec![0, 1]]);
        assert_eq!(leftzero(1), rightzero(1));
    }

    #[test]
    fn rect_bands() {
        let l = Limits::default();
        let t = rect_band_product(&zn(2), 2, 2, &l).unwrap();
        assert_eq!(t.order(), 8);
        assert!(t.is_associative());
        assert_eq!(rect_band_product(&zn(3), 1, 1, &l).unwrap(), zn(3));
        let t = rect_band_product(&zn(2), 2, 1, &l).unwrap();
        let e = t.idempotents();
        assert_eq!(e, vec![0, 1]);
        for &a in &e {
            for &b in &e {
                assert_eq!(t.op(a, b), a, "idempotents form a left-zero band");
            }
        }
        assert!(rect_band_product(&leftzero(2), 1, 1, &l).is_err());
    }

    #[test]
    fn inflations() {
        let l = Limits::default();
        let (t, rep) = inflate_with_map(&zn(2), &[(0, 1)], &l).unwrap();
        assert_eq!(t.order(), 3);
        assert_eq!(rep, vec![0, 1, 0]);
        assert!(t.is_associative());
        assert_eq!(inflate(&leftzero(3), &[], &l).unwrap(), leftzero(3));
        assert!(inflate(&zn(2), &[(5, 1)], &l).is_err());
    }

    #[test]
    fn linear_quasigroups() {
        let g = zn(4);
        let id = Permutation::identity(4);
        let t = linear_quasigroup(&g, &id, &id, 1).unwrap();
        assert!(t.is_quasigroup());
        // x*y = x+y+1 is the group Z4 relabelled, with identity 3.
        assert_eq!(t.identity_of(), Some(3));
        let z5 = zn(5);
        let t = linear_quasigroup(&z5, &multiplier(&z5, 2).unwrap(), &multiplier(&z5, 3).unwrap(), 0).unwrap();
        assert!(t.is_quasigroup());
        let swap = Permutation::from_images(vec![1, 0, 2, 3]).unwrap();
        assert!(linear_quasigroup(&g, &id, &swap, 0).is_err());
        assert!(multiplier(&g, 2).is_err());
    }

    #[test]
    fn fixtures() {
        assert_eq!(fixture("q4a").unwrap().row(0).collect::<Vec<_>>(), vec![1, 3, 2, 0]);
        assert_eq!(fixture("q4b").unwrap().row(0).collect::<Vec<_>>(), vec![1, 0, 3, 2]);
        let b = fixture("band8").unwrap();
        assert_eq!(b.op(band8_index(0, 0, 0), band8_index(1, 1, 0)), band8_index(0, 1, 1));
        assert_eq!(b.label(band8_index(0, 1, 1)), "1_01");
        assert!(fixture("nope").is_err());
        let s3 = s3();
        let c = s3.classify();
        assert!(c.group && !c.commutative);
        let q8 = q8();
        let c = q8.classify();
        assert!(c.group && !c.commutative);
        assert_eq!(c.identity, Some(0));
        // i*j = k, j*i = -k, i^2 = -1
        assert_eq!(q8.op(2, 4), 6);
        assert_eq!(q8.op(4, 2), 7);
        assert_eq!(q8.op(2, 2), 1);
    }

    #[test]
    fn random_generation_is_deterministic() {
        assert_eq!(random_latin_square(5, 7).unwrap(), random_latin_square(5, 7).unwrap());
        assert!(random_latin_square(5, 7).unwrap().is_quasigroup());
        let a = random_semigroup(5, 3).unwrap();
        assert_eq!(a, random_semigroup(5, 3).unwrap());
        assert!(a.is_associative());
        let distinct: std::collections::HashSet<_> =
            (0..50).map(|s| random_semigroup(4, s).unwrap()).collect();
        assert!(distinct.len() > 25);
        assert!(random_semigroup(0, 1).is_err());
        let g = random_identity_groupoid(4, 9).unwrap();
        assert_eq!(g.identity_of(), Some(0));
    }

    #[test]
    fn enumeration_counts() {
        let mut count = 0;
        enumerate_tables(2, TableClass::Semigroup, |_| count += 1).unwrap();
        assert_eq!(count, 8);
        assert_eq!(all_tables(2, TableClass::Quasigroup).unwrap().len(), 2);
        assert_eq!(all_tables(4, TableClass::Quasigroup).unwrap().len(), 576);
        assert_eq!(all_tables(2, TableClass::Groupoid).unwrap().len(), 16);
        assert!(enumerate_tables(4, TableClass::Semigroup, |_| {}).is_err());
        assert!(enumerate_tables(5, TableClass::Quasigroup, |_| {}).is_err());
    }

    #[test]
    fn spec_parsing() {
        let l = Limits::default();
        for text in [
            "zn(4)",
            "abelian-product(2,2)",
            "leftzero(3)",
            "rectband(zn(2),2,2)",
            "inflate(zn(2),0=1)",
            "linearq(zn(5),2,3,1)",
            "linearq(zn(4),[0,1,2,3],[0,3,2,1],1)",
            "product(zn(2),leftzero(2))",
            "band8",
            "random-semigroup(4,1)",
            "random-latin(5,2)",
        ] {
            let spec = GeneratorSpec::parse(text).unwrap();
            assert_eq!(spec.to_string(), text);
            spec.build(&l).unwrap();
        }
        assert_eq!(
            GeneratorSpec::parse("fixture(q4a)").unwrap(),
            GeneratorSpec::Fixture { name: "q4a".into() }
        );
        assert!(GeneratorSpec::parse("zn(4").is_err());
        assert!(GeneratorSpec::parse("zn(4) x").is_err());
        assert!(GeneratorSpec::parse("random-semigroup(4)").is_err());
        assert!(GeneratorSpec::parse("zn(0)").unwrap().build(&l).is_err());
        assert!(GeneratorSpec::parse("zn(65)").unwrap().build(&l).is_err());
    }
}
