//! Abelian and Hamiltonian finite groupoids.
//!
//! Tables are finite binary operations on `{0..n}`. The crate decides the
//! term condition (Abelian) and the block property of subalgebras
//! (Hamiltonian) in two independent ways: by exhaustive oracles that work for
//! any groupoid, and by structural characterizations for groupoids with
//! identity, quasigroups and semigroups. It also builds the decompositions
//! those characterizations talk about.

pub mod analysis;
pub mod census;
pub mod congruence;
pub mod constructors;
pub mod error;
pub mod identity;
pub mod limits;
pub mod oracles;
pub mod partition;
pub mod perm;
pub mod quasigroup;
pub mod semigroup;
pub mod set;
pub mod table;

pub use error::{Error, Result};
pub use limits::Limits;
pub use partition::Partition;
pub use perm::Permutation;
pub use set::ElementSet;
pub use table::{parse_table, parse_table_with, CayleyTable, ClassificationReport, Element};
pub use oracles::{Route, Verdict};
