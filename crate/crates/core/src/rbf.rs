//! Linear radial basis `φ(r) = 1 + r`, its particular solution `ψ` with
//! `ψ'' = φ`, and the collocation matrices `Φ` and `Φ_x`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::LuFactor;

/// Collocation nodes `a = x_1 < x_2 < … < x_N = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    nodes: Vec<f64>,
}

impl Grid {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 nodes, got {}",
                nodes.len()
            )));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGrid("nodes must be finite".into()));
        }
        if let Some(w) = nodes.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid(format!(
                "nodes must be strictly increasing ({} is followed by {})",
                w[0], w[1]
            )));
        }
        Ok(Self { nodes })
    }

    /// `n` equally spaced nodes on `[a, b]`, endpoints exact.
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 nodes, got {n}"
            )));
        }
        if !(a < b) {
            return Err(Error::InvalidGrid(format!("empty interval [{a}, {b}]")));
        }
        let last = (n - 1) as f64;
        let nodes = (0..n)
            .map(|j| match j {
                0 => a,
                j if j == n - 1 => b,
                j => a + (b - a) * j as f64 / last,
            })
            .collect();
        Self::new(nodes)
    }

    /// Uniform grid with spacing `h`; `(b − a) / h` must be an integer to
    /// within `1e-9` relative.
    pub fn with_spacing(a: f64, b: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "spacing h = {h} must be positive"
            )));
        }
        let cells = (b - a) / h;
        let rounded = cells.round();
        if rounded < 2.0 || (cells - rounded).abs() > 1e-9 * rounded.max(1.0) {
            return Err(Error::InvalidGrid(format!(
                "spacing h = {h} does not divide [{a}, {b}] into at least 2 whole cells"
            )));
        }
        Self::uniform(a, b, rounded as usize + 1)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn a(&self) -> f64 {
        self.nodes[0]
    }

    pub fn b(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Nominal spacing `(b − a)/(N − 1)`.
    pub fn h(&self) -> f64 {
        (self.b() - self.a()) / (self.len() - 1) as f64
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.nodes.iter().map(|&x| f(x)))
    }
}

pub fn phi(r: f64) -> f64 {
    1.0 + r
}

pub fn psi(r: f64) -> f64 {
    r * r / 2.0 + r * r * r / 6.0
}

/// `∂/∂x ψ(|x − x_j|) = (x − x_j)(1 + |x − x_j|/2)`.
pub fn psi_x(x: f64, xj: f64) -> f64 {
    let d = x - xj;
    d * (1.0 + d.abs() / 2.0)
}

/// `sgn` with `sgn(0) = 0`.
pub fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `Φ`, `Φ_x` and a reusable factorization of `Φ` for one grid.
#[derive(Debug, Clone)]
pub struct InterpolationOperator {
    phi_matrix: DMatrix<f64>,
    phi_x_matrix: DMatrix<f64>,
    factorization: LuFactor,
    cond_estimate: f64,
}

impl InterpolationOperator {
    pub fn assemble(grid: &Grid) -> Result<Self> {
        let x = grid.nodes();
        let n = x.len();
        let phi_matrix = DMatrix::from_fn(n, n, |i, j| phi((x[i] - x[j]).abs()));
        let phi_x_matrix = DMatrix::from_fn(n, n, |i, j| sign(x[i] - x[j]));
        let factorization = LuFactor::new(phi_matrix.clone())?;
        let cond_estimate = factorization.condition_estimate()?;
        log::debug!("interpolation matrix: N = {n}, cond_1 estimate = {cond_estimate:.3e}");
        if cond_estimate > 1e12 {
            log::warn!("interpolation matrix is ill-conditioned (cond_1 ≈ {cond_estimate:.3e})");
        }
        Ok(Self {
            phi_matrix,
            phi_x_matrix,
            factorization,
            cond_estimate,
        })
    }

    pub fn phi_matrix(&self) -> &DMatrix<f64> {
        &self.phi_matrix
    }

    pub fn phi_x_matrix(&self) -> &DMatrix<f64> {
        &self.phi_x_matrix
    }

    pub fn factorization(&self) -> &LuFactor {
        &self.factorization
    }

    pub fn cond_estimate(&self) -> f64 {
        self.cond_estimate
    }

    pub fn len(&self) -> usize {
        self.phi_matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coefficients `α` with `Φ α = values`.
    pub fn coefficients(&self, values: &DVector<f64>) -> Result<DVector<f64>> {
        self.factorization.solve(values)
    }

    /// `M Φ⁻¹` for a matrix `M` with `N` columns, computed as `(Φ⁻¹ Mᵀ)ᵀ`
    /// since `Φ` is symmetric.
    pub fn right_divide(&self, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        Ok(self.factorization.solve_matrix(&m.transpose())?.transpose())
    }

    /// Nodal derivative estimate `Φ_x Φ⁻¹ u`.
    pub fn derivative(&self, values: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(&self.phi_x_matrix * self.coefficients(values)?)
    }
}

pub fn assemble_interpolation(grid: &Grid) -> Result<InterpolationOperator> {
    InterpolationOperator::assemble(grid)
}

pub fn interpolation_coefficients(
    op: &InterpolationOperator,
    values: &DVector<f64>,
) -> Result<DVector<f64>> {
    op.coefficients(values)
}

/// Evaluates `Σ_j α_j φ(|x − x_j|)`.
pub fn evaluate_expansion(grid: &Grid, coefficients: &DVector<f64>, x: f64) -> f64 {
    grid.nodes()
        .iter()
        .zip(coefficients.iter())
        .map(|(&xj, &a)| a * phi((x - xj).abs()))
        .sum()
}
