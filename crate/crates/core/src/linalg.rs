//! Dense LU factorization with partial pivoting, factor once and apply many
//! times. Storage and the elimination itself come from `nalgebra`; this module
//! adds the pivot guard, transposed solves and a 1-norm condition estimate.

use nalgebra::{DMatrix, DVector, Dyn, LU};

use crate::error::{Error, Result};

/// Pivots smaller than this in magnitude mark the matrix as singular.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct LuFactor {
    lu: LU<f64, Dyn, Dyn>,
    n: usize,
    one_norm: f64,
}

impl LuFactor {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::DimensionMismatch {
                expected: rows,
                got: cols,
            });
        }
        let one_norm = one_norm(&matrix);
        let lu = matrix.lu();
        let u = lu.u();
        for k in 0..rows {
            let pivot = u[(k, k)];
            if !(pivot.abs() >= PIVOT_TOLERANCE) {
                return Err(Error::Singular { column: k, pivot });
            }
        }
        Ok(Self {
            lu,
            n: rows,
            one_norm,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_len(rhs.len())?;
        let mut x = rhs.clone();
        // Pivots were checked at construction, so the triangular solves succeed.
        self.lu.solve_mut(&mut x);
        Ok(x)
    }

    /// Solves `A X = B` column by column.
    pub fn solve_matrix(&self, rhs: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.check_len(rhs.nrows())?;
        let mut x = rhs.clone();
        self.lu.solve_mut(&mut x);
        Ok(x)
    }

    /// Solves `Aᵀ x = b` reusing the factorization of `A`.
    ///
    /// With `PA = LU` we have `Aᵀ = Uᵀ Lᵀ P`, so the solve runs a lower
    /// triangular pass with `Uᵀ`, an upper unit-triangular pass with `Lᵀ`, and
    /// undoes the row permutation.
    pub fn solve_transpose(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_len(rhs.len())?;
        let u_t = self.lu.u().transpose();
        let l_t = self.lu.l().transpose();
        let w = u_t.solve_lower_triangular(rhs).ok_or(Error::Singular {
            column: 0,
            pivot: 0.0,
        })?;
        let mut z = l_t.solve_upper_triangular(&w).ok_or(Error::Singular {
            column: 0,
            pivot: 0.0,
        })?;
        self.lu.p().inv_permute_rows(&mut z);
        Ok(z)
    }

    /// Estimate of `‖A‖₁ ‖A⁻¹‖₁` using Hager's method for the inverse norm.
    pub fn condition_estimate(&self) -> Result<f64> {
        Ok(self.one_norm * self.inverse_one_norm_estimate()?)
    }

    /// Hager (1984) / Higham's `dlacon` style lower bound for `‖A⁻¹‖₁`.
    pub fn inverse_one_norm_estimate(&self) -> Result<f64> {
        let n = self.n;
        let mut x = DVector::from_element(n, 1.0 / n as f64);
        let mut estimate = 0.0;
        for _ in 0..5 {
            let y = self.solve(&x)?;
            let y_norm = y.iter().map(|v| v.abs()).sum::<f64>();
            if y_norm <= estimate {
                break;
            }
            estimate = y_norm;
            let signs = y.map(|v| if v >= 0.0 { 1.0 } else { -1.0 });
            let z = self.solve_transpose(&signs)?;
            let (j, z_max) = z
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (i, v)| {
                    if v.abs() > acc.1 {
                        (i, v.abs())
                    } else {
                        acc
                    }
                });
            if z_max <= z.dot(&x) {
                break;
            }
            x = DVector::zeros(n);
            x[j] = 1.0;
        }
        Ok(estimate)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: len,
            });
        }
        Ok(())
    }
}

/// Maximum absolute column sum.
pub fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn sup_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn sup_distance(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
