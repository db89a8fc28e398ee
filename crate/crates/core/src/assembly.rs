//! Boundary-element matrices for the 1D Laplacian with the dual reciprocity
//! transfer of the inhomogeneous term.
//!
//! For every source point `x_i` the identity
//!
//! ```text
//! [G_i u_x]_a^b − [G_i' u]_a^b + c_i u_i = Σ_j ([G_i ψ_j']_a^b − [G_i' ψ_j]_a^b + c_i ψ_j(x_i)) α_j
//! ```
//!
//! holds once `u_xx` is expanded as `Σ α_j φ_j`. Collecting all source points
//! gives `L q − H u_Γ + C u = D α` with `D = L Ψ_x − H Ψ + Ψ̃`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::rbf::{psi, psi_x, sign, Grid, InterpolationOperator};

/// `G(x, ξ) = ½|x − ξ|`.
pub fn fundamental_solution(x: f64, xi: f64) -> f64 {
    0.5 * (x - xi).abs()
}

/// `∂G/∂x = ½ sgn(x − ξ)` with `sgn(0) = 0`.
pub fn fundamental_solution_dx(x: f64, xi: f64) -> f64 {
    0.5 * sign(x - xi)
}

/// Time-independent operators for one grid. `E = D Φ⁻¹` and `P = Φ_x Φ⁻¹`
/// are formed through the stored factorization of `Φ`, never an explicit
/// inverse.
#[derive(Debug, Clone)]
pub struct DrbemOperators {
    pub l_matrix: DMatrix<f64>,
    pub h_matrix: DMatrix<f64>,
    pub psi_boundary: DMatrix<f64>,
    pub psi_x_boundary: DMatrix<f64>,
    pub psi_tilde: DMatrix<f64>,
    pub d_matrix: DMatrix<f64>,
    pub e_matrix: DMatrix<f64>,
    pub p_matrix: DMatrix<f64>,
    /// `E P`, needed by the advection term of every level system.
    pub ep_matrix: DMatrix<f64>,
    pub free_terms: DVector<f64>,
}

impl DrbemOperators {
    pub fn assemble(grid: &Grid, interp: &InterpolationOperator) -> Result<Self> {
        let x = grid.nodes();
        let n = x.len();
        if interp.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: interp.len(),
            });
        }
        let (a, b) = (grid.a(), grid.b());

        let free_terms = DVector::from_fn(n, |i, _| if i == 0 || i == n - 1 { 0.5 } else { 1.0 });
        let l_matrix = DMatrix::from_fn(n, 2, |i, k| match k {
            0 => -fundamental_solution(a, x[i]),
            _ => fundamental_solution(b, x[i]),
        });
        let h_matrix = DMatrix::from_fn(n, 2, |i, k| match k {
            0 => -fundamental_solution_dx(a, x[i]),
            _ => fundamental_solution_dx(b, x[i]),
        });
        let boundary = [a, b];
        let psi_boundary = DMatrix::from_fn(2, n, |k, j| psi((boundary[k] - x[j]).abs()));
        let psi_x_boundary = DMatrix::from_fn(2, n, |k, j| psi_x(boundary[k], x[j]));
        let psi_tilde = DMatrix::from_fn(n, n, |i, j| free_terms[i] * psi((x[i] - x[j]).abs()));

        let d_matrix = &l_matrix * &psi_x_boundary - &h_matrix * &psi_boundary + &psi_tilde;
        let e_matrix = interp.right_divide(&d_matrix)?;
        let p_matrix = interp.right_divide(interp.phi_x_matrix())?;
        let ep_matrix = &e_matrix * &p_matrix;

        Ok(Self {
            l_matrix,
            h_matrix,
            psi_boundary,
            psi_x_boundary,
            psi_tilde,
            d_matrix,
            e_matrix,
            p_matrix,
            ep_matrix,
            free_terms,
        })
    }

    pub fn len(&self) -> usize {
        self.free_terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Left side of the boundary identity, `L q − H u_Γ + C u`, for nodal
    /// values `u` and boundary fluxes `q = (u_x(a), u_x(b))`.
    pub fn boundary_identity_lhs(&self, u: &DVector<f64>, q: [f64; 2]) -> DVector<f64> {
        let n = self.len();
        let q = DVector::from_column_slice(&q);
        let ub = DVector::from_column_slice(&[u[0], u[n - 1]]);
        &self.l_matrix * q - &self.h_matrix * ub + self.free_terms.component_mul(u)
    }
}

pub fn assemble_drbem(grid: &Grid, interp: &InterpolationOperator) -> Result<DrbemOperators> {
    DrbemOperators::assemble(grid, interp)
}

/// Max residual of `L q − H u_Γ + C u = 0` for the harmonic `u = p x + q`.
/// Any correctly assembled operator set returns roundoff.
pub fn harmonic_identity_check(ops: &DrbemOperators, grid: &Grid, slope: f64, offset: f64) -> f64 {
    let u = grid.sample(|x| slope * x + offset);
    ops.boundary_identity_lhs(&u, [slope, slope]).amax()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rbf::assemble_interpolation;

    fn three() -> (Grid, DrbemOperators) {
        let g = Grid::new(vec![0.0, 0.5, 1.0]).unwrap();
        let i = assemble_interpolation(&g).unwrap();
        let ops = assemble_drbem(&g, &i).unwrap();
        (g, ops)
    }

    #[test]
    fn fundamental_solution_values() {
        assert_eq!(fundamental_solution(0.0, 0.0), 0.0);
        assert_eq!(fundamental_solution(1.0, 0.0), 0.5);
        assert_eq!(fundamental_solution(-2.0, 1.0), 1.5);
        assert_eq!(fundamental_solution_dx(1.0, 0.0), 0.5);
        assert_eq!(fundamental_solution_dx(0.0, 1.0), -0.5);
        assert_eq!(fundamental_solution_dx(1.0, 1.0), 0.0);
    }

    #[test]
    fn three_node_boundary_matrices() {
        let (_, ops) = three();
        let l = DMatrix::from_row_slice(3, 2, &[0.0, 0.5, -0.25, 0.25, -0.5, 0.0]);
        let h = DMatrix::from_row_slice(3, 2, &[0.0, 0.5, 0.5, 0.5, 0.5, 0.0]);
        assert_eq!(ops.l_matrix, l);
        assert_eq!(ops.h_matrix, h);
        assert_eq!(ops.free_terms.as_slice(), &[0.5, 1.0, 0.5]);
    }

    #[test]
    fn three_node_psi_tilde_first_row() {
        let (_, ops) = three();
        // ½ ψ(0.5) = ½ (0.125 + 0.125/6)
        let expected = [0.0, 0.5 * (0.125 + 0.125 / 6.0), 1.0 / 3.0];
        for (j, e) in expected.iter().enumerate() {
            assert!((ops.psi_tilde[(0, j)] - e).abs() < 1e-15);
        }
        assert!((ops.psi_tilde[(0, 1)] - 0.072_916_666_666_666_67).abs() < 1e-15);
    }

    #[test]
    fn d_matches_its_definition() {
        let (_, ops) = three();
        let d = &ops.l_matrix * &ops.psi_x_boundary - &ops.h_matrix * &ops.psi_boundary
            + &ops.psi_tilde;
        assert!((d - &ops.d_matrix).amax() <= 1e-12);
    }

    #[test]
    fn harmonic_identity_on_three_nodes() {
        let (g, ops) = three();
        assert!(harmonic_identity_check(&ops, &g, 0.0, 1.0) <= 1e-12);
        assert!(harmonic_identity_check(&ops, &g, 1.0, 0.0) <= 1e-12);
        assert!(harmonic_identity_check(&ops, &g, 2.0, -3.0) <= 1e-12);
    }

    #[test]
    fn non_harmonic_field_is_detected() {
        let (g, ops) = three();
        let u = g.sample(|x| x * x);
        assert!(ops.boundary_identity_lhs(&u, [0.0, 2.0]).amax() > 1e-3);
    }

    #[test]
    fn mismatched_interp_is_rejected() {
        let g3 = Grid::uniform(0.0, 1.0, 3).unwrap();
        let g4 = Grid::uniform(0.0, 1.0, 4).unwrap();
        let i4 = assemble_interpolation(&g4).unwrap();
        assert!(matches!(
            assemble_drbem(&g3, &i4),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
