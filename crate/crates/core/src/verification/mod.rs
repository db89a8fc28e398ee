//! Error metrics, an independent finite-difference solver, convergence
//! studies and the reproduction presets.

mod metrics;
mod oracle;
pub mod presets;
mod selfcheck;
mod study;

pub use metrics::{compute_errors, ErrorReport};
pub use oracle::{fd_oracle, FdRun};
pub use selfcheck::{psi_second_derivative_error, self_check, CheckOutcome};
pub use study::{convergence_study, observed_order, ConvergenceTable, StudyRow};
