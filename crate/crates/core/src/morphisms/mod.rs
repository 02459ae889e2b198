//! Homomorphisms, natural transformations, fibered products and the
//! Morita-equivalence decision procedure.
//!
//! Generalized maps `H -> G` are spans `H <- H' -> G` whose left leg is an
//! equivalence; no quotient category is materialized.

mod equivalence;
mod fibered;
mod hom;
mod iso;

use thiserror::Error;

pub use equivalence::{
    cover_groupoid, is_equivalence, morita_equivalent, skeleton, EquivalenceFailure, MoritaVerdict,
    OrbitMatch,
};
pub use fibered::{fibered_product, FiberedProduct};
pub use hom::{validate_hom, validate_nat_trans, GroupoidHom, HomViolation, NatTrans, NatViolation};
pub use iso::{groups_isomorphic, GroupIso};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("homomorphisms have different targets")]
    MismatchedTargets,
    #[error("object `{0}` is not covered by the family")]
    NotCovering(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("construction failed: {0}")]
    Construction(String),
}
