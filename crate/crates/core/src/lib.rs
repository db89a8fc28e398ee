//! One-dimensional dual reciprocity boundary element solver for nonlinear
//! parabolic equations
//!
//! ```text
//! u_t + ν(t) u_x − μ(t) u_xx − η(t) F(u) = 0,   (x, t) ∈ [a, b] × [0, T]
//! ```
//!
//! with Dirichlet data. Space is handled by the 1D Laplace fundamental
//! solution with linear radial basis functions `1 + r` carrying the domain
//! term to the boundary; time by backward Euler with the nonlinear part of
//! `F` lagged and corrected by fixed-point iteration.
//!
//! ```no_run
//! use drbem::{pde, DrbemSolver, StepConfig};
//!
//! let problem = pde::generalized_fitzhugh_nagumo(1.0)?;
//! let solver = DrbemSolver::for_problem(&problem, 1.0 / 32.0)?;
//! let cfg = StepConfig::new(1e-3)?;
//! let trajectory = solver.run(&problem, &cfg, 1.0, &[0.5])?;
//! println!("{:?}", trajectory.final_state().u);
//! # Ok::<(), drbem::Error>(())
//! ```

// `!(x > tol)` style tests are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
mod error;
pub mod integrator;
pub mod linalg;
pub mod pde;
pub mod rbf;
pub mod verification;

pub use assembly::{assemble_drbem, harmonic_identity_check, DrbemOperators};
pub use error::{Error, Result};
pub use integrator::{
    DrbemSolver, LevelSolution, SolverState, StepConfig, TimeLevelSystem, Trajectory,
};
pub use pde::{CoefficientSet, PdeProblem, ReactionTerm};
pub use rbf::{assemble_interpolation, interpolation_coefficients, Grid, InterpolationOperator};
pub use verification::{
    compute_errors, convergence_study, fd_oracle, ConvergenceTable, ErrorReport,
};
