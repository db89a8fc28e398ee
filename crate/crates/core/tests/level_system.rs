use drbem::pde::{self, CoefficientSet, PdeProblem, ReactionTerm};
use drbem::{DrbemSolver, Grid, StepConfig};
use nalgebra::DVector;

/// Residual of the discretized level equation, built directly from the
/// operators rather than from the assembled block matrix.
#[allow(clippy::too_many_arguments)]
fn level_residual(
    solver: &DrbemSolver,
    problem: &PdeProblem,
    tau: f64,
    t: f64,
    u_prev: &DVector<f64>,
    lagged: &DVector<f64>,
    u: &DVector<f64>,
    q: [f64; 2],
) -> f64 {
    let ops = solver.operators();
    let c = problem.coeffs();
    let (nu, mu, eta) = (c.nu(t), c.mu(t), c.eta(t));
    let r = problem.reaction();
    let forcing = (u - u_prev) / (tau * mu) + &ops.p_matrix * u * (nu / mu)
        - (u * r.linear_slope() + lagged.map(|v| r.nonlinear(v))) * (eta / mu);
    (ops.boundary_identity_lhs(u, q) - &ops.e_matrix * forcing).amax()
}

#[test]
fn three_node_level_system_matches_direct_residual() {
    let problem = pde::generalized_fitzhugh_nagumo(1.0).unwrap();
    let solver = DrbemSolver::new(Grid::uniform(-1.0, 1.0, 3).unwrap()).unwrap();
    let cfg = StepConfig::new(0.05).unwrap();
    let u_prev = solver.initial_state(&problem).u;
    let sys = solver
        .build_level_system(&problem, &cfg, 0.05, &u_prev, None)
        .unwrap();
    let sol = solver.solve_with_lagged(&sys, &problem, &u_prev).unwrap();
    let res = level_residual(
        &solver,
        &problem,
        0.05,
        0.05,
        &u_prev,
        &u_prev,
        &sol.u,
        [sol.q_left, sol.q_right],
    );
    assert!(res <= 1e-12, "residual {res}");

    // A perturbed interior value must break the equation.
    let mut wrong = sol.u.clone();
    wrong[1] += 1e-3;
    let res = level_residual(
        &solver,
        &problem,
        0.05,
        0.05,
        &u_prev,
        &u_prev,
        &wrong,
        [sol.q_left, sol.q_right],
    );
    assert!(res > 1e-6);
}

#[test]
fn corrected_solution_satisfies_the_level_equation_at_its_own_lag() {
    let problem = pde::fisher();
    let solver = DrbemSolver::for_problem(&problem, 0.25).unwrap();
    let cfg = StepConfig::new(1e-2).unwrap();
    let u_prev = solver.initial_state(&problem).u;
    let sys = solver
        .build_level_system(&problem, &cfg, 0.01, &u_prev, None)
        .unwrap();
    let sol = solver
        .corrector_solve(&sys, &problem, &cfg, &u_prev)
        .unwrap();
    assert!(sol.iterations >= 2);
    let res = level_residual(
        &solver,
        &problem,
        0.01,
        0.01,
        &u_prev,
        &sol.u,
        &sol.u,
        [sol.q_left, sol.q_right],
    );
    assert!(res <= 1e-8, "residual {res}");
}

#[test]
fn boundary_values_are_imposed_exactly() {
    let problem = pde::generalized_fitzhugh_nagumo(1.0).unwrap();
    let solver = DrbemSolver::for_problem(&problem, 1.0 / 8.0).unwrap();
    let cfg = StepConfig::new(0.01).unwrap();
    let snaps = [0.1, 0.25, 0.5];
    let traj = solver.run(&problem, &cfg, 0.5, &snaps).unwrap();
    for s in &traj.snapshots {
        let n = s.u.len();
        assert_eq!(s.u[0], problem.bc_left(s.t));
        assert_eq!(s.u[n - 1], problem.bc_right(s.t));
    }
}

#[test]
fn steady_harmonic_state_is_preserved() {
    let (p, q) = (0.8, -0.3);
    let problem = PdeProblem::from_exact(
        "harmonic",
        CoefficientSet::constant(0.0, 1.3, 1.0),
        ReactionTerm::zero(),
        0.0,
        2.0,
        1.0,
        move |x, _| p * x + q,
    )
    .unwrap();
    let solver = DrbemSolver::for_problem(&problem, 1.0 / 16.0).unwrap();
    let cfg = StepConfig::new(0.01).unwrap();
    let traj = solver.run(&problem, &cfg, 1.0, &[]).unwrap();
    let end = traj.final_state();
    assert_eq!(end.step_index, 100);
    let exact = solver.grid().sample(|x| p * x + q);
    assert!((&end.u - exact).amax() <= 1e-10);
    assert!((end.q_left - p).abs() <= 1e-8 && (end.q_right - p).abs() <= 1e-8);
}
