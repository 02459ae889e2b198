//! Finite groupoids, their nerves, inertia, G-spaces and complexes of groups.

pub mod category;
pub mod complexes;
pub mod constructors;
pub mod group;
pub mod groupoid;
pub mod inertia;
pub mod gspaces;
pub mod linalg;
pub mod morphisms;
pub mod nerve;
pub mod report;

/// Exact rationals, the default field for rank computations.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision integers.
pub type Integer = num_bigint::BigInt;
