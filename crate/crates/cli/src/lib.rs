//! GSPEC parsing and the `orbikit` command line.

pub mod commands;
pub mod gspec;
pub mod report;

pub use commands::run_command;
pub use report::{ReportDocument, Status};
