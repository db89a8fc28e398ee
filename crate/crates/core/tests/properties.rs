use drbem::pde::ReactionTerm;
use drbem::rbf::evaluate_expansion;
use drbem::{assemble_drbem, assemble_interpolation, harmonic_identity_check, Grid};
use nalgebra::DVector;
use proptest::prelude::*;

/// Strictly increasing nodes on `[a, a + len]` with random interior gaps.
fn grid_strategy(max_nodes: usize) -> impl Strategy<Value = Grid> {
    (
        -5.0..5.0f64,
        0.5..10.0f64,
        prop::collection::vec(0.2..1.0f64, 2..max_nodes),
    )
        .prop_map(|(a, len, gaps)| {
            let total: f64 = gaps.iter().sum();
            let mut x = a;
            let mut nodes = vec![a];
            for g in &gaps[..gaps.len() - 1] {
                x += len * g / total;
                nodes.push(x);
            }
            nodes.push(a + len);
            Grid::new(nodes).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nagumo_split_is_consistent(rho in -2.0..2.0f64, u in -1.5..1.5f64) {
        for r in [ReactionTerm::cubic_nagumo(rho), ReactionTerm::cubic_nagumo(rho).negated()] {
            let split = r.linear_slope() * u + r.nonlinear(u);
            prop_assert!((split - r.full(u)).abs() <= 1e-12);
        }
    }

    #[test]
    fn logistic_split_is_consistent(alpha in 0.5..6.0f64, u in 0.0..1.5f64) {
        let r = ReactionTerm::generalized_logistic(alpha);
        let split = r.linear_slope() * u + r.nonlinear(u);
        prop_assert!((split - r.full(u)).abs() <= 1e-12);
    }

    #[test]
    fn harmonic_identity_on_random_grids(grid in grid_strategy(40), p in -5.0..5.0f64, q in -5.0..5.0f64) {
        let interp = assemble_interpolation(&grid).unwrap();
        let ops = assemble_drbem(&grid, &interp).unwrap();
        let scale = 1.0 + p.abs() * (grid.b() - grid.a()) + q.abs();
        prop_assert!(harmonic_identity_check(&ops, &grid, p, q) <= 1e-12 * scale);
    }

    #[test]
    fn interpolation_round_trip(grid in grid_strategy(60), seed in prop::collection::vec(-1.0..1.0f64, 60)) {
        let n = grid.len();
        let interp = assemble_interpolation(&grid).unwrap();
        let data = DVector::from_fn(n, |i, _| seed[i]);
        let alpha = interp.coefficients(&data).unwrap();
        let scale = 1.0 + data.amax();
        for (i, &x) in grid.nodes().iter().enumerate() {
            prop_assert!((evaluate_expansion(&grid, &alpha, x) - data[i]).abs() <= 1e-10 * scale);
        }
        let back = interp.coefficients(&(interp.phi_matrix() * &alpha)).unwrap();
        prop_assert!((back - &alpha).amax() <= 1e-9 * (1.0 + alpha.amax()));
    }

    #[test]
    fn e_times_phi_recovers_d(grid in grid_strategy(30)) {
        let interp = assemble_interpolation(&grid).unwrap();
        let ops = assemble_drbem(&grid, &interp).unwrap();
        let diff = &ops.e_matrix * interp.phi_matrix() - &ops.d_matrix;
        prop_assert!(diff.amax() <= 1e-9 * (1.0 + ops.d_matrix.amax()));
    }
}

/// A piecewise-linear expansion reproduces a linear second derivative
/// exactly, so cubic fields satisfy the discrete identity to roundoff.
#[test]
fn cubic_fields_satisfy_the_discrete_identity() {
    let grid = Grid::uniform(0.0, 1.0, 9).unwrap();
    let interp = assemble_interpolation(&grid).unwrap();
    let ops = assemble_drbem(&grid, &interp).unwrap();
    type Field = fn(f64) -> f64;
    let cases: [(Field, Field, Field); 2] = [
        (|x| x * x, |x| 2.0 * x, |_| 2.0),
        (|x| x * x * x - x, |x| 3.0 * x * x - 1.0, |x| 6.0 * x),
    ];
    for (u, ux, uxx) in cases {
        let lhs = ops.boundary_identity_lhs(&grid.sample(u), [ux(0.0), ux(1.0)]);
        let rhs = &ops.e_matrix * grid.sample(uxx);
        assert!((lhs - rhs).amax() <= 1e-8);
    }
}

#[test]
fn e_matches_d_on_unit_vectors() {
    let grid = Grid::uniform(-1.0, 2.0, 17).unwrap();
    let interp = assemble_interpolation(&grid).unwrap();
    let ops = assemble_drbem(&grid, &interp).unwrap();
    for k in 0..grid.len() {
        let mut e = DVector::zeros(grid.len());
        e[k] = 1.0;
        let lhs = &ops.e_matrix * (interp.phi_matrix() * &e);
        assert!((lhs - &ops.d_matrix * &e).amax() <= 1e-10);
    }
}
