use std::path::{Path, PathBuf};

use drbem::verification::presets::{Reproduction, ReproductionReport};
use drbem::verification::{fd_oracle, self_check, CheckOutcome};
use drbem::{compute_errors, DrbemSolver, ErrorReport, Trajectory};

use crate::config::RunConfig;
use crate::output::{number, optional, Table};
use crate::CliError;

/// Per-snapshot line of the solve summary.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSummary {
    pub t: f64,
    pub step: usize,
    pub errors: Option<ErrorReport>,
    pub profile: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveSummary {
    pub snapshots: Vec<SnapshotSummary>,
    pub summary_path: PathBuf,
    /// `(path, sup-norm distance to the oracle)` when the oracle was run.
    pub oracle: Option<(PathBuf, f64)>,
}

pub fn profile_file_name(step: usize) -> String {
    format!("profile_step{step:07}.csv")
}

/// Integrates the configured problem and writes one profile CSV per
/// snapshot plus `summary.csv` (and `oracle.csv` on request) under
/// `output_path`.
pub fn cmd_solve(cfg: &RunConfig) -> Result<SolveSummary, CliError> {
    let problem = cfg.problem()?;
    let step_cfg = cfg.step_config()?;
    let solver = DrbemSolver::new(cfg.grid()?)?;
    log::info!(
        "solving {} on [{}, {}] with N = {}, tau = {}, to t = {}",
        problem.name(),
        cfg.a,
        cfg.b,
        solver.grid().len(),
        cfg.tau,
        cfg.t_end
    );
    let times = cfg.output_times();
    let traj = solver.run(&problem, &step_cfg, cfg.t_end, &times)?;
    let nodes = solver.grid().nodes();

    let mut summary = Table::new([
        "t",
        "step",
        "l_inf",
        "rms",
        "corrector_iterations_last",
        "corrector_iterations_max",
        "corrector_iterations_mean",
    ]);
    let mut snapshots = Vec::new();
    // The final state is always recorded, even when it is not a snapshot.
    for state in &traj.snapshots {
        let exact = if cfg.compare_exact {
            Some(
                solver
                    .grid()
                    .sample(|x| problem.exact_at(x, state.t).unwrap_or(f64::NAN)),
            )
        } else {
            None
        };
        let errors = exact
            .as_ref()
            .map(|e| compute_errors(&state.u, e, state.t))
            .transpose()?;

        let mut profile = match exact {
            Some(_) => Table::new(["x", "u_numeric", "u_exact", "abs_error"]),
            None => Table::new(["x", "u_numeric"]),
        };
        profile.note(format!("{} at t = {}", problem.name(), number(state.t)));
        for (i, &x) in nodes.iter().enumerate() {
            let mut row = vec![number(x), number(state.u[i])];
            if let Some(e) = &exact {
                row.push(number(e[i]));
                row.push(number((state.u[i] - e[i]).abs()));
            }
            profile.push(row);
        }
        let path = cfg.output_path.join(profile_file_name(state.step_index));
        profile.write(&path)?;

        let levels = &traj.corrector_iterations[..state.step_index];
        let (last, max, mean) = if levels.is_empty() {
            (String::new(), String::new(), String::new())
        } else {
            let total: usize = levels.iter().sum();
            (
                state.corrector_iters_last.to_string(),
                levels.iter().max().copied().unwrap_or(0).to_string(),
                number(total as f64 / levels.len() as f64),
            )
        };
        summary.push(vec![
            number(state.t),
            state.step_index.to_string(),
            optional(errors.map(|e| e.l_inf)),
            optional(errors.map(|e| e.rms)),
            last,
            max,
            mean,
        ]);
        if let Some(e) = errors {
            log::info!(
                "t = {}: L_inf = {:.4e}, RMS = {:.4e}",
                state.t,
                e.l_inf,
                e.rms
            );
        }
        snapshots.push(SnapshotSummary {
            t: state.t,
            step: state.step_index,
            errors,
            profile: path,
        });
    }
    let summary_path = cfg.output_path.join("summary.csv");
    summary.write(&summary_path)?;

    let oracle = if cfg.run_oracle {
        Some(write_oracle(cfg, &problem, &solver, &traj)?)
    } else {
        None
    };
    Ok(SolveSummary {
        snapshots,
        summary_path,
        oracle,
    })
}

fn write_oracle(
    cfg: &RunConfig,
    problem: &drbem::PdeProblem,
    solver: &DrbemSolver,
    traj: &Trajectory,
) -> Result<(PathBuf, f64), CliError> {
    let step_cfg = cfg.step_config()?;
    let fd = fd_oracle(problem, solver.grid().len(), &step_cfg, cfg.t_end)?;
    let u = &traj.final_state().u;
    let mut table = Table::new(["x", "u_drbem", "u_oracle", "abs_difference"]);
    table.note(format!(
        "finite-difference oracle, {} at t = {}",
        problem.name(),
        number(cfg.t_end)
    ));
    for (i, &x) in solver.grid().nodes().iter().enumerate() {
        table.push(vec![
            number(x),
            number(u[i]),
            number(fd.u[i]),
            number((u[i] - fd.u[i]).abs()),
        ]);
    }
    let distance = (u - &fd.u).amax();
    log::info!("sup-norm distance to the finite-difference oracle: {distance:.4e}");
    let path = cfg.output_path.join("oracle.csv");
    table.write(&path)?;
    Ok((path, distance))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproduceSummary {
    pub path: PathBuf,
    pub report: ReproductionReport,
}

pub fn reproduction_table(report: &ReproductionReport) -> Table {
    let sweep = report.kind == Reproduction::Fig5;
    let mut header = Vec::new();
    if sweep {
        header.push("alpha");
    }
    header.extend(["h", "tau", "l_inf", "rms"]);
    if !sweep {
        header.extend([
            "published_l_inf",
            "published_rms",
            "l_inf_rel_deviation",
            "rms_rel_deviation",
            "l_inf_ratio",
            "observed_order",
        ]);
    }
    header.extend(["max_corrector_iterations", "status"]);
    let mut table = Table::new(header);
    for note in &report.notes {
        table.note(note.clone());
    }

    // Ratios are taken against the preceding row when it shares h or tau.
    let mut previous: Option<(f64, f64, f64)> = None;
    for row in &report.rows {
        let mut cells = Vec::new();
        if sweep {
            cells.push(optional(row.alpha));
        }
        cells.extend([
            number(row.h),
            number(row.tau),
            optional(row.l_inf()),
            optional(row.rms()),
        ]);
        if !sweep {
            let ratio = previous
                .filter(|&(h, tau, _)| h == row.h || tau == row.tau)
                .zip(row.l_inf())
                .map(|((_, _, p), c)| p / c);
            cells.extend([
                optional(row.published.map(|p| p.l_inf)),
                optional(row.published.map(|p| p.rms)),
                optional(row.l_inf_deviation()),
                optional(row.rms_deviation()),
                optional(ratio),
                optional(row.observed_order),
            ]);
        }
        previous = row.l_inf().map(|e| (row.h, row.tau, e));
        match &row.result {
            Ok(o) => cells.extend([o.max_corrector_iterations.to_string(), "ok".to_string()]),
            Err(e) => cells.extend([String::new(), format!("failed: {e}")]),
        }
        table.push(cells);
    }
    table
}

/// Runs one published study and writes `<out_dir>/<name>.csv`. Failed rows
/// are recorded in the file; the command still fails afterwards.
pub fn cmd_reproduce(kind: Reproduction, out_dir: &Path) -> Result<ReproduceSummary, CliError> {
    log::info!("reproducing {kind}");
    let report = kind.run()?;
    let path = out_dir.join(format!("{}.csv", kind.name()));
    reproduction_table(&report).write(&path)?;
    let failed = report.failures();
    if failed > 0 {
        return Err(CliError::PartialFailure {
            what: "rows",
            failed,
            total: report.rows.len(),
        });
    }
    Ok(ReproduceSummary { path, report })
}

/// Runs the invariant self-test suite; fails if any check misses its
/// threshold.
pub fn cmd_check() -> Result<Vec<CheckOutcome>, CliError> {
    let outcomes = self_check()?;
    let failed = outcomes.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        for c in outcomes.iter().filter(|c| !c.passed) {
            log::error!("{}: {:.3e} > {:.1e}", c.name, c.value, c.threshold);
        }
        return Err(CliError::PartialFailure {
            what: "checks",
            failed,
            total: outcomes.len(),
        });
    }
    Ok(outcomes)
}
