//! Implicit time stepping with a lagged-nonlinearity predictor–corrector.
//!
//! At level `n` the boundary identity `L q + C u − H u_Γ = E b` is imposed
//! with
//!
//! ```text
//! b = (uⁿ − uⁿ⁻¹)/(τ μ) + (ν/μ) P uⁿ − (η/μ) (λ uⁿ + F_n(ũ))
//! ```
//!
//! where `E = D Φ⁻¹` and `P = Φ_x Φ⁻¹`. Everything but `F_n(ũ)` is linear in
//! the unknowns `[u_x(a), u_x(b), u_2, …, u_{N−1}]`, so the level matrix is
//! factored once and the corrector only rebuilds the right-hand side.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::assembly::DrbemOperators;
use crate::error::{Error, Result};
use crate::linalg::{sup_distance, LuFactor};
use crate::pde::{PdeProblem, MU_ZERO_TOLERANCE};
use crate::rbf::{Grid, InterpolationOperator};

pub const DEFAULT_EPSILON: f64 = 1e-10;
pub const DEFAULT_MAX_CORRECTOR_ITERS: usize = 100;

/// Relative tolerance when checking that a time is a whole number of steps.
const STEP_ALIGNMENT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig {
    pub tau: f64,
    pub epsilon: f64,
    pub max_corrector_iters: usize,
}

impl StepConfig {
    pub fn new(tau: f64) -> Result<Self> {
        let cfg = Self {
            tau,
            epsilon: DEFAULT_EPSILON,
            max_corrector_iters: DEFAULT_MAX_CORRECTOR_ITERS,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_epsilon(self, epsilon: f64) -> Result<Self> {
        let cfg = Self { epsilon, ..self };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_max_corrector_iters(self, max_corrector_iters: usize) -> Result<Self> {
        let cfg = Self {
            max_corrector_iters,
            ..self
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tau = {} must be positive",
                self.tau
            )));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "epsilon = {} must be positive",
                self.epsilon
            )));
        }
        if self.max_corrector_iters == 0 {
            return Err(Error::InvalidConfig(
                "max_corrector_iters must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Number of whole steps to reach `t`, or an error when `t` is not a
    /// multiple of `tau`.
    pub fn steps_to(&self, t: f64) -> Result<usize> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "time {t} must be non-negative"
            )));
        }
        let ratio = t / self.tau;
        let steps = ratio.round();
        if (ratio - steps).abs() > STEP_ALIGNMENT_TOLERANCE * steps.max(1.0) {
            return Err(Error::InvalidConfig(format!(
                "time {t} is not a whole number of steps of tau = {}",
                self.tau
            )));
        }
        Ok(steps as usize)
    }
}

/// Solution at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub u: DVector<f64>,
    /// `u_x(a)`, diagnostic.
    pub q_left: f64,
    /// `u_x(b)`, diagnostic.
    pub q_right: f64,
    pub t: f64,
    pub step_index: usize,
    pub corrector_iters_last: usize,
}

/// The factored level matrix. Shared between levels when the coefficients
/// are constant in time.
#[derive(Debug)]
pub struct LevelMatrix {
    pub a_matrix: DMatrix<f64>,
    pub factorization: LuFactor,
    /// Columns of `C − E M` multiplying the Dirichlet values `u(a)`, `u(b)`.
    k_first: DVector<f64>,
    k_last: DVector<f64>,
}

/// One time level: the matrix is independent of the corrector iterate, only
/// the `F_n(ũ)` contribution to the right-hand side changes.
#[derive(Debug, Clone)]
pub struct TimeLevelSystem {
    pub matrix: Arc<LevelMatrix>,
    pub rhs_fixed: DVector<f64>,
    pub t: f64,
    pub nu: f64,
    pub mu: f64,
    pub eta: f64,
    pub g_left: f64,
    pub g_right: f64,
}

impl TimeLevelSystem {
    pub fn a_matrix(&self) -> &DMatrix<f64> {
        &self.matrix.a_matrix
    }

    /// Coefficient of `E F_n(ũ)` on the right-hand side, `−η/μ`.
    pub fn nonlinear_weight(&self) -> f64 {
        -self.eta / self.mu
    }
}

/// Outcome of the corrector at one level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSolution {
    pub u: DVector<f64>,
    pub q_left: f64,
    pub q_right: f64,
    pub iterations: usize,
    pub last_difference: f64,
}

/// States at the requested snapshot times plus per-level corrector counts.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub snapshots: Vec<SolverState>,
    /// Corrector solves used at each level `1..=n`.
    pub corrector_iterations: Vec<usize>,
}

impl Trajectory {
    pub fn final_state(&self) -> &SolverState {
        self.snapshots
            .last()
            .expect("a trajectory always holds its final state")
    }

    pub fn max_corrector_iterations(&self) -> usize {
        self.corrector_iterations.iter().copied().max().unwrap_or(0)
    }
}

/// Grid, interpolation and boundary operators for one node set. Immutable,
/// so one instance can serve many concurrent runs.
#[derive(Debug, Clone)]
pub struct DrbemSolver {
    grid: Grid,
    interp: InterpolationOperator,
    ops: DrbemOperators,
}

impl DrbemSolver {
    pub fn new(grid: Grid) -> Result<Self> {
        let interp = InterpolationOperator::assemble(&grid)?;
        let ops = DrbemOperators::assemble(&grid, &interp)?;
        Ok(Self { grid, interp, ops })
    }

    /// Uniform grid of spacing `h` over the problem's domain.
    pub fn for_problem(problem: &PdeProblem, h: f64) -> Result<Self> {
        Self::new(Grid::with_spacing(problem.a(), problem.b(), h)?)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn interpolation(&self) -> &InterpolationOperator {
        &self.interp
    }

    pub fn operators(&self) -> &DrbemOperators {
        &self.ops
    }

    fn check_problem(&self, problem: &PdeProblem) -> Result<()> {
        let tol = 1e-12 * (problem.b() - problem.a());
        if (self.grid.a() - problem.a()).abs() > tol || (self.grid.b() - problem.b()).abs() > tol {
            return Err(Error::InvalidGrid(format!(
                "grid spans [{}, {}] but the problem is posed on [{}, {}]",
                self.grid.a(),
                self.grid.b(),
                problem.a(),
                problem.b()
            )));
        }
        Ok(())
    }

    /// Assembles and factors the level matrix for coefficients at `t`.
    pub fn level_matrix(
        &self,
        problem: &PdeProblem,
        cfg: &StepConfig,
        t: f64,
    ) -> Result<LevelMatrix> {
        let (nu, mu, eta) = coefficients_at(problem, t)?;
        let n = self.grid.len();
        let ops = &self.ops;
        let lambda = problem.reaction().linear_slope();

        // C − E M with M = (1/(τμ) − ηλ/μ) I + (ν/μ) P.
        let diag_scale = 1.0 / (cfg.tau * mu) - eta * lambda / mu;
        let mut k = &ops.e_matrix * (-diag_scale) - &ops.ep_matrix * (nu / mu);
        for i in 0..n {
            k[(i, i)] += ops.free_terms[i];
        }

        let mut a_matrix = DMatrix::zeros(n, n);
        a_matrix.columns_mut(0, 2).copy_from(&ops.l_matrix);
        a_matrix
            .columns_mut(2, n - 2)
            .copy_from(&k.columns(1, n - 2));
        let factorization = LuFactor::new(a_matrix.clone()).map_err(|e| Error::AtTime {
            t,
            source: Box::new(e),
        })?;
        Ok(LevelMatrix {
            a_matrix,
            factorization,
            k_first: k.column(0).into_owned(),
            k_last: k.column(n - 1).into_owned(),
        })
    }

    /// Builds the level system at `t_n`, reusing `matrix` when given.
    pub fn build_level_system(
        &self,
        problem: &PdeProblem,
        cfg: &StepConfig,
        t_n: f64,
        u_prev: &DVector<f64>,
        matrix: Option<Arc<LevelMatrix>>,
    ) -> Result<TimeLevelSystem> {
        self.check_problem(problem)?;
        let n = self.grid.len();
        if u_prev.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: u_prev.len(),
            });
        }
        let (nu, mu, eta) = coefficients_at(problem, t_n)?;
        let matrix = match matrix {
            Some(m) => m,
            None => Arc::new(self.level_matrix(problem, cfg, t_n)?),
        };
        let g_left = problem.bc_left(t_n);
        let g_right = problem.bc_right(t_n);
        let ops = &self.ops;
        let g = DVector::from_column_slice(&[g_left, g_right]);
        let rhs_fixed = &ops.h_matrix * g
            - &matrix.k_first * g_left
            - &matrix.k_last * g_right
            - &ops.e_matrix * u_prev * (1.0 / (cfg.tau * mu));
        Ok(TimeLevelSystem {
            matrix,
            rhs_fixed,
            t: t_n,
            nu,
            mu,
            eta,
            g_left,
            g_right,
        })
    }

    /// One linear solve with the nonlinear term frozen at `lagged`.
    pub fn solve_with_lagged(
        &self,
        sys: &TimeLevelSystem,
        problem: &PdeProblem,
        lagged: &DVector<f64>,
    ) -> Result<LevelSolution> {
        let fn_values = self.nonlinear_values(sys, problem, lagged)?;
        let rhs = &sys.rhs_fixed + &self.ops.e_matrix * fn_values * sys.nonlinear_weight();
        let s = sys.matrix.factorization.solve(&rhs)?;
        Ok(self.unpack(sys, &s))
    }

    fn nonlinear_values(
        &self,
        sys: &TimeLevelSystem,
        problem: &PdeProblem,
        u: &DVector<f64>,
    ) -> Result<DVector<f64>> {
        let reaction = problem.reaction();
        let values = u.map(|v| reaction.nonlinear(v));
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::ReactionDomain { t: sys.t });
        }
        Ok(values)
    }

    /// Splits the unknown vector `[q_a, q_b, u_2 … u_{N−1}]` into a solution.
    fn unpack(&self, sys: &TimeLevelSystem, s: &DVector<f64>) -> LevelSolution {
        let n = self.grid.len();
        let mut u = DVector::zeros(n);
        u[0] = sys.g_left;
        u[n - 1] = sys.g_right;
        u.rows_mut(1, n - 2).copy_from(&s.rows(2, n - 2));
        LevelSolution {
            u,
            q_left: s[0],
            q_right: s[1],
            iterations: 1,
            last_difference: f64::NAN,
        }
    }

    /// Fixed-point iteration on the lagged nonlinearity, seeded with
    /// `ũ = uⁿ⁻¹`. Only successive solves are compared, so at least two
    /// solves are always performed.
    ///
    /// After the first solve each iterate is obtained by solving for the
    /// change in the nonlinear term only. The iterates are the same as with
    /// full solves, but the rounding error scales with the update rather than
    /// with the large `u/τ` part of the right-hand side, which otherwise puts
    /// a floor near `1e-10` under the successive differences on fine grids.
    pub fn corrector_solve(
        &self,
        sys: &TimeLevelSystem,
        problem: &PdeProblem,
        cfg: &StepConfig,
        u_prev: &DVector<f64>,
    ) -> Result<LevelSolution> {
        let weight = sys.nonlinear_weight();
        let mut fn_lagged = self.nonlinear_values(sys, problem, u_prev)?;
        let rhs = &sys.rhs_fixed + &self.ops.e_matrix * &fn_lagged * weight;
        let mut s = sys.matrix.factorization.solve(&rhs)?;
        let mut last_difference = f64::INFINITY;
        for iteration in 2..=cfg.max_corrector_iters {
            let u = self.unpack(sys, &s).u;
            let fn_new = self.nonlinear_values(sys, problem, &u)?;
            let change = &fn_new - &fn_lagged;
            fn_lagged = fn_new;
            let ds = sys
                .matrix
                .factorization
                .solve(&(&self.ops.e_matrix * change * weight))?;
            s += &ds;
            last_difference = ds.rows(2, ds.len() - 2).amax();
            if last_difference <= cfg.epsilon {
                let mut sol = self.unpack(sys, &s);
                sol.iterations = iteration;
                sol.last_difference = last_difference;
                return Ok(sol);
            }
        }
        Err(Error::NoConvergence {
            t: sys.t,
            iterations: cfg.max_corrector_iters,
            last_difference,
        })
    }

    /// `‖S(u) − u‖∞` where `S` is one more corrector solve lagged at `u`;
    /// zero for an exact fixed point of the level system.
    pub fn fixed_point_residual(
        &self,
        sys: &TimeLevelSystem,
        problem: &PdeProblem,
        u: &DVector<f64>,
    ) -> Result<f64> {
        let next = self.solve_with_lagged(sys, problem, u)?;
        Ok(sup_distance(&next.u, u))
    }

    /// Boundary-flux estimate `P u` at the two endpoints.
    fn flux_estimate(&self, u: &DVector<f64>) -> [f64; 2] {
        let du = &self.ops.p_matrix * u;
        [du[0], du[du.len() - 1]]
    }

    pub fn initial_state(&self, problem: &PdeProblem) -> SolverState {
        let n = self.grid.len();
        let mut u = self.grid.sample(|x| problem.initial(x));
        u[0] = problem.bc_left(0.0);
        u[n - 1] = problem.bc_right(0.0);
        let [q_left, q_right] = self.flux_estimate(&u);
        SolverState {
            u,
            q_left,
            q_right,
            t: 0.0,
            step_index: 0,
            corrector_iters_last: 0,
        }
    }

    /// Advances from the initial condition to `t_end`, recording the states
    /// at `snapshots` (each a whole number of steps). The final state is
    /// always recorded.
    pub fn run(
        &self,
        problem: &PdeProblem,
        cfg: &StepConfig,
        t_end: f64,
        snapshots: &[f64],
    ) -> Result<Trajectory> {
        cfg.validate()?;
        self.check_problem(problem)?;
        if t_end > problem.horizon() * (1.0 + 1e-12) {
            return Err(Error::InvalidConfig(format!(
                "t_end = {t_end} exceeds the problem horizon {}",
                problem.horizon()
            )));
        }
        let steps = cfg.steps_to(t_end)?;
        let mut snapshot_steps = snapshots
            .iter()
            .map(|&t| {
                if t > t_end * (1.0 + 1e-12) {
                    return Err(Error::InvalidConfig(format!(
                        "snapshot time {t} is after t_end = {t_end}"
                    )));
                }
                cfg.steps_to(t)
            })
            .collect::<Result<Vec<_>>>()?;
        snapshot_steps.push(steps);
        snapshot_steps.sort_unstable();
        snapshot_steps.dedup();

        let mut state = self.initial_state(problem);
        let mut recorded = Vec::with_capacity(snapshot_steps.len());
        let mut next_snapshot = snapshot_steps.iter().peekable();
        if next_snapshot.peek() == Some(&&0) {
            recorded.push(state.clone());
            next_snapshot.next();
        }

        let shared = if problem.coeffs().is_time_independent() && steps > 0 {
            Some(Arc::new(self.level_matrix(problem, cfg, cfg.tau)?))
        } else {
            None
        };
        let mut iterations = Vec::with_capacity(steps);
        for step in 1..=steps {
            let t = step as f64 * cfg.tau;
            let sys = self.build_level_system(problem, cfg, t, &state.u, shared.clone())?;
            let sol = self.corrector_solve(&sys, problem, cfg, &state.u)?;
            iterations.push(sol.iterations);
            state = SolverState {
                u: sol.u,
                q_left: sol.q_left,
                q_right: sol.q_right,
                t,
                step_index: step,
                corrector_iters_last: sol.iterations,
            };
            if next_snapshot.peek() == Some(&&step) {
                recorded.push(state.clone());
                next_snapshot.next();
            }
        }
        Ok(Trajectory {
            snapshots: recorded,
            corrector_iterations: iterations,
        })
    }
}

fn coefficients_at(problem: &PdeProblem, t: f64) -> Result<(f64, f64, f64)> {
    let c = problem.coeffs();
    let mu = c.mu(t);
    if !(mu.abs() > MU_ZERO_TOLERANCE) {
        return Err(Error::DegenerateDiffusion { t, mu });
    }
    Ok((c.nu(t), mu, c.eta(t)))
}
