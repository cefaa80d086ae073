//! Batch verification, pointwise pipeline summaries and reports.

pub mod pipeline;
pub mod report;
pub mod verify;

pub use pipeline::{realify_at, reduce_at, resolve_scenario, ReduceSummary, RealifySummary, SCENARIO_DIR_ENV};
pub use report::{IdentityRecord, PointRow, VerificationReport, SCHEMA_VERSION};
pub use verify::{run_verification, Identity, Tolerances, VerifyOptions};
