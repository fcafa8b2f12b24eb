use serde::{Deserialize, Serialize};

/// Size caps shared by parsing, products and the exhaustive oracles.
///
/// Everything downstream of a table is at least cubic in its order, and the
/// subuniverse family of a table can be exponential, so each stage has its
/// own ceiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest table order accepted by the parser and by products.
    pub max_order: usize,
    /// Largest order for which the subuniverse family is enumerated.
    pub max_subuniverse_order: usize,
    /// Largest number of closed sets collected before giving up.
    pub max_subuniverses: usize,
    /// Largest base order for the square-table Abelian oracle (it works on
    /// a table of order `n^2`).
    pub max_square_base: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_order: 64,
            max_subuniverse_order: 12,
            max_subuniverses: 100_000,
            max_square_base: 64,
        }
    }
}
