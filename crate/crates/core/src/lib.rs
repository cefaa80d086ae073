//! Pointwise verification of the one-component reduction of the Dirac
//! equation in an external electromagnetic field.
//!
//! Every field is represented by a truncated multivariate Taylor [`Jet`] at a
//! point, so each identity of the reduction becomes a finite set of
//! coefficient comparisons. A finite-difference oracle in [`oracle`] checks
//! the jets independently, and [`harness`] runs the identity suites in batch.

pub mod dirac;
pub mod dsl;
pub mod error;
pub mod fields;
pub mod harness;
pub mod jet;
pub mod oracle;
pub mod realify;
pub mod reduction;
pub mod scalar;

pub use error::{Error, Result, ScenarioError};
pub use jet::{Jet, MultiIndex, DEFAULT_ORDER, MAX_ORDER};
