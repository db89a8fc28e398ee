//! Fixtures shared by the criterion benchmarks.

use drbem::{pde, DrbemSolver, PdeProblem};

/// Spacings of the published h-refinement on `[−1, 1]`.
pub const SPACINGS: [f64; 4] = [1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0];

pub fn generalized_fn() -> PdeProblem {
    pde::generalized_fitzhugh_nagumo(1.0).expect("rho = 1 is valid")
}

pub fn solver(problem: &PdeProblem, h: f64) -> DrbemSolver {
    DrbemSolver::for_problem(problem, h).expect("spacing divides the domain")
}
