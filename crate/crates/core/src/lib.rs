//! Finite based universal algebras: endomorphism representations by frames,
//! conjugate functions, medial commutativity and dilatation monoids.
//!
//! The finite machinery works on tabulated [`Algebra`]s. Infinite carriers from
//! the [`gallery`] implement [`SymbolicAlgebra`] and are checked by seeded
//! sampling instead of enumeration.

pub mod algebra;
pub mod combinator;
pub mod commutativity;
pub mod dilatation;
pub mod elementary;
pub mod error;
pub mod gallery;
pub mod representation;
pub mod symbolic;

pub use algebra::{Algebra, Assignment, Carrier, Elem, Operation, Rank, SetAryOp, UnaryMap};
pub use combinator::{FunctionTable, Indexing};
pub use error::{Error, Result};
pub use representation::{Frame, Representation};
pub use symbolic::{SymbolicAlgebra, SymbolicBasis};

/// Size guards shared by every exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest carrier for which all `|A|^|A|` unary maps may be scanned.
    pub max_carrier: usize,
    /// Cap on the number of distinct tables kept by an elementary closure.
    pub max_tables: usize,
    /// Cap on the number of cases of any single exhaustive law check.
    pub max_cases: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_carrier: 8,
            max_tables: 10_000,
            max_cases: 1 << 24,
        }
    }
}
