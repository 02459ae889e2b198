//! Exact linear algebra: integer matrices, Smith normal form, ranks over a
//! field, and finitely generated abelian groups.

pub mod abelian;
pub mod field;
pub mod int;
pub mod smith;
pub mod sparse;

pub use abelian::{homology_from_boundaries, subquotient, AbelianGroup};
pub use field::{rank_over, Field, SparseEchelon};
pub use int::{big_to, ExactInt, IntMatrix};
pub use smith::{smith_in, smith_invariants, smith_normal_form, SmithForm, Track};
pub use sparse::{sparse_invariants, SparseIntMatrix};

/// A fixed-width intermediate did not fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("integer overflow")]
pub struct Overflow;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("torsion coefficient {0} does not fit in 64 bits")]
    CoefficientTooLarge(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("generator does not lie in the kernel lattice")]
    NotInLattice,
}
