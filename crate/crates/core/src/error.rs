use thiserror::Error;

/// Errors raised while building or running a solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid step configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular matrix: pivot magnitude {pivot:e} in column {column}")]
    Singular { column: usize, pivot: f64 },

    #[error("diffusion coefficient mu({t}) = {mu:e} is too close to zero")]
    DegenerateDiffusion { t: f64, mu: f64 },

    #[error(
        "corrector did not converge at t = {t} after {iterations} iterations \
         (last successive difference {last_difference:e})"
    )]
    NoConvergence {
        t: f64,
        iterations: usize,
        last_difference: f64,
    },

    #[error("reaction term produced a non-finite value at t = {t} (u outside the domain of F)")]
    ReactionDomain { t: f64 },

    #[error("finite-difference stencil leaves the domain: {0}")]
    StencilOutOfDomain(String),

    #[error("problem has no exact solution to compare against")]
    MissingExact,

    #[error("at t = {t}: {source}")]
    AtTime { t: f64, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of the nonlinear or linear solve, as opposed to
    /// malformed input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. }
                | Error::DegenerateDiffusion { .. }
                | Error::NoConvergence { .. }
                | Error::ReactionDomain { .. }
                | Error::AtTime { .. }
        )
    }
}
