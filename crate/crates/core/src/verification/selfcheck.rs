//! Fast invariant checks: assembly identities, the particular solution, the
//! interpolation and the catalog's exact solutions.

use nalgebra::DVector;

use crate::assembly::{assemble_drbem, harmonic_identity_check};
use crate::error::Result;
use crate::pde::{self, residual_check, PdeProblem};
use crate::rbf::{assemble_interpolation, evaluate_expansion, phi, psi, Grid};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            passed: value <= threshold,
        }
    }
}

pub fn self_check() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();

    for n in [3, 9, 33] {
        let grid = Grid::uniform(0.0, 1.0, n)?;
        let interp = assemble_interpolation(&grid)?;
        let ops = assemble_drbem(&grid, &interp)?;
        let worst = [(0.0, 1.0), (1.0, 0.0), (2.0, -3.0), (-0.7, 0.4)]
            .iter()
            .map(|&(p, q)| harmonic_identity_check(&ops, &grid, p, q))
            .fold(0.0, f64::max);
        out.push(CheckOutcome::new(
            format!("harmonic identity, N = {n}"),
            worst,
            1e-12,
        ));
    }

    out.push(CheckOutcome::new(
        "psi'' = phi on 50 radii in (0, 3)",
        psi_second_derivative_error(),
        1e-5,
    ));

    let grid = Grid::uniform(0.0, 1.0, 33)?;
    let interp = assemble_interpolation(&grid)?;
    let data = grid.sample(|x| (3.0 * x).sin() + x * x + 0.5);
    let alpha = interp.coefficients(&data)?;
    let reproduced = DVector::from_iterator(
        grid.len(),
        grid.nodes()
            .iter()
            .map(|&x| evaluate_expansion(&grid, &alpha, x)),
    );
    out.push(CheckOutcome::new(
        "interpolation exactness at nodes (relative)",
        (reproduced - &data).amax() / data.amax(),
        1e-10,
    ));
    let v = grid.sample(|x| (7.0 * x).cos() - 0.3);
    let round_trip = interp.coefficients(&(interp.phi_matrix() * &v))?;
    out.push(CheckOutcome::new(
        "factorization round trip (relative)",
        (round_trip - &v).amax() / v.amax(),
        1e-10,
    ));

    let catalog: Vec<PdeProblem> = vec![
        pde::fitzhugh_nagumo(0.75),
        pde::newell_whitehead(),
        pde::generalized_fitzhugh_nagumo(1.0)?,
        pde::generalized_fitzhugh_nagumo(1.5)?,
        pde::fisher(),
        pde::allen_cahn(),
        pde::generalized_fisher(3.0)?,
    ];
    for problem in &catalog {
        out.push(CheckOutcome::new(
            format!("exact-solution residual, {}", problem.name()),
            max_exact_residual(problem, 20, 1e-3)?,
            1e-4,
        ));
    }
    Ok(out)
}

/// Largest relative mismatch between the second central difference of `ψ`
/// (step `1e-4`) and `φ` over 50 radii in `(0, 3)`.
pub fn psi_second_derivative_error() -> f64 {
    let d = 1e-4;
    (1..=50)
        .map(|k| {
            let r = 3.0 * k as f64 / 51.0;
            let fd = (psi(r + d) - 2.0 * psi(r) + psi(r - d)) / (d * d);
            (fd - phi(r)).abs() / phi(r)
        })
        .fold(0.0, f64::max)
}

/// Max `|residual_check|` of the problem's exact solution over `count`
/// low-discrepancy interior points.
pub fn max_exact_residual(problem: &PdeProblem, count: usize, step: f64) -> Result<f64> {
    let exact = problem.exact().ok_or(crate::Error::MissingExact)?.clone();
    let field = move |x: f64, t: f64| exact(x, t);
    let mut worst = 0.0_f64;
    for (x, t) in interior_points(problem, count, 4.0 * step) {
        worst = worst.max(residual_check(problem, &field, x, t, step)?.abs());
    }
    Ok(worst)
}

/// Halton (2, 3) points in the space-time window, `margin` away from its
/// edges.
pub fn interior_points(problem: &PdeProblem, count: usize, margin: f64) -> Vec<(f64, f64)> {
    let (a, b) = (problem.a() + margin, problem.b() - margin);
    let (t0, t1) = (margin, problem.horizon() - margin);
    (1..=count)
        .map(|k| (a + (b - a) * halton(k, 2), t0 + (t1 - t0) * halton(k, 3)))
        .collect()
}

fn halton(mut index: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}
