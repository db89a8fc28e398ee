use nalgebra::DVector;

use crate::error::{Error, Result};

/// Nodal errors against an exact solution, over interior nodes only (the
/// Dirichlet values are imposed exactly).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub l_inf: f64,
    /// `sqrt(Σ e_j² / n_interior)`.
    pub rms: f64,
    pub n_interior: usize,
    pub time: f64,
}

pub fn compute_errors(
    numeric: &DVector<f64>,
    exact_at_nodes: &DVector<f64>,
    time: f64,
) -> Result<ErrorReport> {
    if numeric.len() != exact_at_nodes.len() {
        return Err(Error::DimensionMismatch {
            expected: exact_at_nodes.len(),
            got: numeric.len(),
        });
    }
    let n = numeric.len();
    if n < 3 {
        return Err(Error::InvalidGrid(format!(
            "error metrics need at least 3 nodes, got {n}"
        )));
    }
    let interior = 1..n - 1;
    let (mut l_inf, mut sum_sq) = (0.0_f64, 0.0);
    for j in interior {
        let e = exact_at_nodes[j] - numeric[j];
        l_inf = l_inf.max(e.abs());
        sum_sq += e * e;
    }
    let n_interior = n - 2;
    Ok(ErrorReport {
        l_inf,
        rms: (sum_sq / n_interior as f64).sqrt(),
        n_interior,
        time,
    })
}
