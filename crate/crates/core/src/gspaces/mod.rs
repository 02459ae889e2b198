//! Spaces and sheaves over finite groupoids.

pub mod module;
pub mod space;

pub use module::*;
pub use space::*;

use crate::category::StructureError;
use crate::groupoid::GroupoidError;
use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GSpaceError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("`{point}` lies over an object that is not the target of `{arrow}`")]
    NotComposable { point: String, arrow: String },
    #[error("action of `{arrow}` on `{point}` is given twice")]
    DuplicateAction { point: String, arrow: String },
    #[error("action of `{arrow}` on `{point}` is missing")]
    MissingAction { point: String, arrow: String },
    #[error("invalid G-space: {0}")]
    Invalid(String),
    #[error("invalid set action: {0}")]
    SetAction(String),
    #[error("objects live over different groupoids or groups")]
    BaseMismatch,
    #[error("invalid module: {0}")]
    Module(String),
    #[error("{needed} cochain coordinates exceed the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: usize },
    #[error("cohomology is only computed up to degree 3")]
    DegreeTooLarge,
}
