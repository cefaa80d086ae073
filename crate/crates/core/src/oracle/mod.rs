//! Independent numerical checks: finite differences over raw samples,
//! operator chains built from those differences, exact series solutions and
//! seeded random inputs.

pub mod fd;
pub mod fd_ops;
pub mod random;
pub mod series;

pub use fd::{compare_jet_vs_fd, fd_partial, FdConfig, FdEstimate, FdRow, ToleranceTable};
pub use fd_ops::FdOps;
pub use random::{random_scenario, seeded, RandomFieldSpec};
