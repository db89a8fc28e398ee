//! Second-order finite differences in space, backward Euler in time. Shares
//! nothing with the boundary-element path except the problem definition and
//! the corrector policy (seed, tolerance, cap).

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::integrator::StepConfig;
use crate::linalg::{sup_distance, PIVOT_TOLERANCE};
use crate::pde::{PdeProblem, MU_ZERO_TOLERANCE};
use crate::rbf::Grid;

#[derive(Debug, Clone, PartialEq)]
pub struct FdRun {
    pub grid: Grid,
    pub u: DVector<f64>,
    pub corrector_iterations: Vec<usize>,
}

/// Solves `problem` on `n_nodes` uniform nodes to `t_end` with step
/// `cfg.tau`, returning the final nodal values.
pub fn fd_oracle(
    problem: &PdeProblem,
    n_nodes: usize,
    cfg: &StepConfig,
    t_end: f64,
) -> Result<FdRun> {
    cfg.validate()?;
    let grid = Grid::uniform(problem.a(), problem.b(), n_nodes)?;
    if t_end > problem.horizon() * (1.0 + 1e-12) {
        return Err(Error::InvalidConfig(format!(
            "t_end = {t_end} exceeds the problem horizon {}",
            problem.horizon()
        )));
    }
    let steps = cfg.steps_to(t_end)?;
    let n = n_nodes;
    let h = grid.h();
    let tau = cfg.tau;
    let coeffs = problem.coeffs();
    let reaction = problem.reaction();
    let lambda = reaction.linear_slope();

    let mut u = grid.sample(|x| problem.initial(x));
    u[0] = problem.bc_left(0.0);
    u[n - 1] = problem.bc_right(0.0);
    let mut iterations = Vec::with_capacity(steps);

    let m = n - 2;
    let (mut lower, mut diag, mut upper) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    for step in 1..=steps {
        let t = step as f64 * tau;
        let (nu, mu, eta) = (coeffs.nu(t), coeffs.mu(t), coeffs.eta(t));
        if !(mu.abs() > MU_ZERO_TOLERANCE) {
            return Err(Error::DegenerateDiffusion { t, mu });
        }
        let off_lo = -nu / (2.0 * h) - mu / (h * h);
        let off_up = nu / (2.0 * h) - mu / (h * h);
        let centre = 1.0 / tau + 2.0 * mu / (h * h) - eta * lambda;
        lower.fill(off_lo);
        diag.fill(centre);
        upper.fill(off_up);
        let (g_left, g_right) = (problem.bc_left(t), problem.bc_right(t));

        let u_prev = u.clone();
        let mut lagged = u_prev.clone();
        let mut previous: Option<DVector<f64>> = None;
        let mut converged = None;
        let mut last_difference = f64::INFINITY;
        for iteration in 1..=cfg.max_corrector_iters {
            let mut rhs = Vec::with_capacity(m);
            for i in 1..n - 1 {
                let f = reaction.nonlinear(lagged[i]);
                if !f.is_finite() {
                    return Err(Error::ReactionDomain { t });
                }
                rhs.push(u_prev[i] / tau + eta * f);
            }
            rhs[0] -= off_lo * g_left;
            rhs[m - 1] -= off_up * g_right;
            let interior = solve_tridiagonal(&lower, &diag, &upper, &rhs)?;
            let mut next = DVector::zeros(n);
            next[0] = g_left;
            next[n - 1] = g_right;
            for (i, v) in interior.into_iter().enumerate() {
                next[i + 1] = v;
            }
            if let Some(prev) = previous.take() {
                last_difference = sup_distance(&next, &prev);
                if last_difference <= cfg.epsilon {
                    converged = Some((next, iteration));
                    break;
                }
            }
            lagged = next.clone();
            previous = Some(next);
        }
        match converged {
            Some((next, iteration)) => {
                u = next;
                iterations.push(iteration);
            }
            None => {
                return Err(Error::NoConvergence {
                    t,
                    iterations: cfg.max_corrector_iters,
                    last_difference,
                })
            }
        }
    }
    Ok(FdRun {
        grid,
        u,
        corrector_iterations: iterations,
    })
}

/// Thomas algorithm; `lower[0]` and `upper[m − 1]` are ignored.
fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let m = diag.len();
    let mut c = vec![0.0; m];
    let mut d = vec![0.0; m];
    let mut pivot = diag[0];
    if pivot.abs() < PIVOT_TOLERANCE {
        return Err(Error::Singular { column: 0, pivot });
    }
    c[0] = upper[0] / pivot;
    d[0] = rhs[0] / pivot;
    for i in 1..m {
        pivot = diag[i] - lower[i] * c[i - 1];
        if pivot.abs() < PIVOT_TOLERANCE {
            return Err(Error::Singular { column: i, pivot });
        }
        c[i] = upper[i] / pivot;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / pivot;
    }
    for i in (0..m - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pde::{CoefficientSet, ReactionTerm};

    #[test]
    fn tridiagonal_small_system() {
        // [[2,1,0],[1,2,1],[0,1,2]] x = [4,8,8] has x = [1,2,3].
        let x = solve_tridiagonal(
            &[0.0, 1.0, 1.0],
            &[2.0, 2.0, 2.0],
            &[1.0, 1.0, 0.0],
            &[4.0, 8.0, 8.0],
        )
        .unwrap();
        for (got, want) in x.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn linear_profile_is_preserved() {
        let p = PdeProblem::from_exact(
            "heat",
            CoefficientSet::constant(0.0, 1.0, 0.0),
            ReactionTerm::zero(),
            0.0,
            1.0,
            1.0,
            |x, _| 2.0 * x - 1.0,
        )
        .unwrap();
        let cfg = StepConfig::new(0.01).unwrap();
        let run = fd_oracle(&p, 17, &cfg, 1.0).unwrap();
        let expected = run.grid.sample(|x| 2.0 * x - 1.0);
        assert!((run.u - expected).amax() < 1e-8);
    }

    #[test]
    fn fisher_converges_under_refinement() {
        // Backward Euler dominates at these sizes, so refine h and τ together.
        let p = crate::pde::fisher();
        let err = |n: usize, tau: f64| {
            let cfg = StepConfig::new(tau).unwrap();
            let run = fd_oracle(&p, n, &cfg, 1.0).unwrap();
            let exact = run.grid.sample(|x| p.exact_at(x, 1.0).unwrap());
            (run.u - exact).amax()
        };
        let (coarse, fine) = (err(65, 1e-3), err(129, 5e-4));
        assert!(coarse < 1e-2, "{coarse}");
        assert!(fine < coarse, "{fine} !< {coarse}");
    }
}
