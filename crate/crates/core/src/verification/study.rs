use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::integrator::{DrbemSolver, StepConfig};
use crate::pde::PdeProblem;
use crate::rbf::Grid;
use crate::verification::{compute_errors, ErrorReport};

/// One `(h, τ)` run of a study.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub h: f64,
    pub tau: f64,
    pub result: std::result::Result<RowOutcome, Error>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowOutcome {
    pub errors: ErrorReport,
    pub max_corrector_iterations: usize,
}

impl StudyRow {
    pub fn errors(&self) -> Option<&ErrorReport> {
        self.result.as_ref().ok().map(|o| &o.errors)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<StudyRow>,
    /// `observed_orders[i]` compares rows `i − 1` and `i`; `None` for the
    /// first row, when both parameters changed, or when a row failed.
    pub observed_orders: Vec<Option<f64>>,
}

impl ConvergenceTable {
    pub fn from_rows(rows: Vec<StudyRow>) -> Self {
        let mut observed_orders = vec![None];
        for pair in rows.windows(2) {
            observed_orders.push(observed_order(&pair[0], &pair[1]));
        }
        observed_orders.truncate(rows.len());
        Self {
            rows,
            observed_orders,
        }
    }

    /// L∞ column, or `None` if any row failed.
    pub fn l_inf(&self) -> Option<Vec<f64>> {
        self.rows
            .iter()
            .map(|r| r.errors().map(|e| e.l_inf))
            .collect()
    }

    pub fn rms(&self) -> Option<Vec<f64>> {
        self.rows
            .iter()
            .map(|r| r.errors().map(|e| e.rms))
            .collect()
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.result.is_err()).count()
    }
}

/// `log(e₁/e₂) / log(p₁/p₂)` where `p` is the one parameter that changed.
pub fn observed_order(coarse: &StudyRow, fine: &StudyRow) -> Option<f64> {
    let (e1, e2) = (coarse.errors()?.l_inf, fine.errors()?.l_inf);
    let same = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs());
    let ratio = match (same(coarse.h, fine.h), same(coarse.tau, fine.tau)) {
        (true, false) => coarse.tau / fine.tau,
        (false, true) => coarse.h / fine.h,
        _ => return None,
    };
    if e1 > 0.0 && e2 > 0.0 {
        Some((e1 / e2).ln() / ratio.ln())
    } else {
        None
    }
}

/// Runs every `(h, τ)` pair (τ outer, h inner, in the given order) to
/// `t_end` and measures the error against the problem's exact solution.
/// Individual run failures are recorded in their row. Rows execute in
/// parallel; the table order is deterministic.
pub fn convergence_study(
    problem: &PdeProblem,
    h_list: &[f64],
    tau_list: &[f64],
    t_end: f64,
) -> Result<ConvergenceTable> {
    convergence_study_with(problem, h_list, tau_list, t_end, StepConfig::new)
}

pub fn convergence_study_with(
    problem: &PdeProblem,
    h_list: &[f64],
    tau_list: &[f64],
    t_end: f64,
    config: impl Fn(f64) -> Result<StepConfig> + Sync,
) -> Result<ConvergenceTable> {
    let exact = problem.exact().ok_or(Error::MissingExact)?.clone();

    // One operator set per spacing, shared across time steps.
    let solvers: BTreeMap<u64, std::result::Result<Arc<DrbemSolver>, Error>> = h_list
        .par_iter()
        .map(|&h| {
            let solver = Grid::with_spacing(problem.a(), problem.b(), h)
                .and_then(DrbemSolver::new)
                .map(Arc::new);
            (h.to_bits(), solver)
        })
        .collect();

    let pairs: Vec<(f64, f64)> = tau_list
        .iter()
        .flat_map(|&tau| h_list.iter().map(move |&h| (h, tau)))
        .collect();
    let rows = pairs
        .par_iter()
        .map(|&(h, tau)| {
            let result = (|| {
                let solver = solvers[&h.to_bits()].clone()?;
                let cfg = config(tau)?;
                let traj = solver.run(problem, &cfg, t_end, &[])?;
                let state = traj.final_state();
                let exact_nodes = solver.grid().sample(|x| exact(x, state.t));
                Ok(RowOutcome {
                    errors: compute_errors(&state.u, &exact_nodes, state.t)?,
                    max_corrector_iterations: traj.max_corrector_iterations(),
                })
            })();
            if let Err(e) = &result {
                log::warn!("study row h = {h}, tau = {tau} failed: {e}");
            }
            StudyRow { h, tau, result }
        })
        .collect();
    Ok(ConvergenceTable::from_rows(rows))
}
