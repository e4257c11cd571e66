//! Invariant suites, oracle comparisons and their reports.

mod baseline;
pub mod fixtures;
mod report;
pub mod sample;
mod suites;

pub use baseline::{gauss_jordan, ClassicalHamilton, ClassicalLagrange};
pub use report::{Check, Report};
pub use suites::*;
