//! Parameter sets and published error values for the reproduction runs.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pde::{fitzhugh_nagumo, generalized_fisher, generalized_fitzhugh_nagumo, PdeProblem};
use crate::verification::study::{convergence_study, RowOutcome};
use crate::verification::ConvergenceTable;

/// A published `(h, τ, L∞, RMS)` row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedRow {
    pub h: f64,
    pub tau: f64,
    pub l_inf: f64,
    pub rms: f64,
}

const fn row(h: f64, tau: f64, l_inf: f64, rms: f64) -> PublishedRow {
    PublishedRow { h, tau, l_inf, rms }
}

/// Nagumo kink, `ρ = 3/4`; the domain, horizon and `ρ` are not published
/// with this table and are assumed (see [`TABLE1_ASSUMPTIONS`]).
pub const TABLE1: [PublishedRow; 15] = [
    row(1.0 / 4.0, 1.0 / 500.0, 2.8473e-05, 1.9553e-05),
    row(1.0 / 8.0, 1.0 / 500.0, 8.0477e-06, 5.2319e-06),
    row(1.0 / 16.0, 1.0 / 500.0, 2.7413e-06, 1.7839e-06),
    row(1.0 / 32.0, 1.0 / 500.0, 1.4138e-06, 9.3950e-07),
    row(1.0 / 64.0, 1.0 / 500.0, 1.0823e-06, 7.3079e-07),
    row(1.0 / 4.0, 1.0 / 1000.0, 2.7938e-05, 1.9159e-05),
    row(1.0 / 8.0, 1.0 / 1000.0, 7.5096e-06, 4.8528e-06),
    row(1.0 / 16.0, 1.0 / 1000.0, 2.2037e-06, 1.4083e-06),
    row(1.0 / 32.0, 1.0 / 1000.0, 8.7637e-07, 5.6270e-07),
    row(1.0 / 64.0, 1.0 / 1000.0, 5.4445e-07, 3.5318e-07),
    row(1.0 / 4.0, 1.0 / 2000.0, 2.7711e-05, 1.8996e-05),
    row(1.0 / 8.0, 1.0 / 2000.0, 7.2794e-06, 4.6964e-06),
    row(1.0 / 16.0, 1.0 / 2000.0, 1.9737e-06, 1.2544e-06),
    row(1.0 / 32.0, 1.0 / 2000.0, 6.4648e-07, 4.0951e-07),
    row(1.0 / 64.0, 1.0 / 2000.0, 3.1454e-07, 1.9998e-07),
];

pub const TABLE1_RHO: f64 = 0.75;
pub const TABLE1_DOMAIN: (f64, f64) = (-10.0, 10.0);
pub const TABLE1_T_END: f64 = 1.0;
pub const TABLE1_ASSUMPTIONS: &str =
    "ASSUMED: rho = 3/4, domain [-10, 10], t_end = 1 (not published with the table)";

/// Time-dependent FitzHugh–Nagumo, `ρ = 1` on `[−1, 1]`, `τ = 10⁻³`, `t = 1`.
pub const TABLE2: [PublishedRow; 6] = [
    row(1.0 / 4.0, 1e-3, 1.0914e-03, 9.5674e-04),
    row(1.0 / 8.0, 1e-3, 3.4491e-04, 2.9281e-04),
    row(1.0 / 16.0, 1e-3, 1.5805e-04, 1.2422e-04),
    row(1.0 / 32.0, 1e-3, 1.1082e-04, 8.2027e-05),
    row(1.0 / 64.0, 1e-3, 9.8895e-05, 7.1495e-05),
    row(1.0 / 128.0, 1e-3, 9.5897e-05, 6.8814e-05),
];

/// Same problem, `h = 1/128`, τ halving from `1/100`.
pub const TABLE3: [PublishedRow; 6] = [
    row(1.0 / 128.0, 1.0 / 100.0, 9.5923e-04, 6.8834e-04),
    row(1.0 / 128.0, 1.0 / 200.0, 4.7752e-04, 3.4244e-04),
    row(1.0 / 128.0, 1.0 / 400.0, 2.3862e-04, 1.7109e-04),
    row(1.0 / 128.0, 1.0 / 800.0, 1.1965e-04, 8.5833e-05),
    row(1.0 / 128.0, 1.0 / 1600.0, 6.0287e-05, 4.3306e-05),
    row(1.0 / 128.0, 1.0 / 3200.0, 3.0634e-05, 2.2068e-05),
];

pub const TABLE23_RHO: f64 = 1.0;
pub const TABLE23_T_END: f64 = 1.0;

pub const FIG5_ALPHAS: [f64; 6] = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
pub const FIG5_H: f64 = 1.0 / 16.0;
pub const FIG5_TAU: f64 = 1.0 / 1000.0;
pub const FIG5_T_END: f64 = 1.0;
pub const FIG5_NOTE: &str =
    "NOTE: figure caption states t = 10; the equation is posed on [-2, 2] x [0, 1], so t_end = 1";

pub fn table1_problem() -> PdeProblem {
    fitzhugh_nagumo(TABLE1_RHO)
        .with_domain(TABLE1_DOMAIN.0, TABLE1_DOMAIN.1, TABLE1_T_END)
        .expect("Table 1 window is valid")
}

pub fn table23_problem() -> PdeProblem {
    generalized_fitzhugh_nagumo(TABLE23_RHO).expect("rho = 1 is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reproduction {
    Table1,
    Table2,
    Table3,
    Fig5,
}

impl Reproduction {
    pub const ALL: [Reproduction; 4] = [Self::Table1, Self::Table2, Self::Table3, Self::Fig5];

    pub fn name(self) -> &'static str {
        match self {
            Self::Table1 => "table1",
            Self::Table2 => "table2",
            Self::Table3 => "table3",
            Self::Fig5 => "fig5",
        }
    }

    pub fn notes(self) -> Vec<String> {
        match self {
            Self::Table1 => vec![TABLE1_ASSUMPTIONS.to_string()],
            Self::Table2 => vec![format!(
                "generalized FitzHugh-Nagumo, rho = 1, domain [-1, 1], tau = 1e-3, t_end = {TABLE23_T_END}"
            )],
            Self::Table3 => vec![format!(
                "generalized FitzHugh-Nagumo, rho = 1, domain [-1, 1], h = 1/128, t_end = {TABLE23_T_END}"
            )],
            Self::Fig5 => vec![
                "generalized Fisher, domain [-2, 2], h = 1/16, tau = 1/1000".to_string(),
                FIG5_NOTE.to_string(),
            ],
        }
    }

    pub fn run(self) -> Result<ReproductionReport> {
        let rows = match self {
            Self::Table1 => published_study(&table1_problem(), &TABLE1, TABLE1_T_END)?,
            Self::Table2 => published_study(&table23_problem(), &TABLE2, TABLE23_T_END)?,
            Self::Table3 => published_study(&table23_problem(), &TABLE3, TABLE23_T_END)?,
            Self::Fig5 => fig5_sweep()?,
        };
        Ok(ReproductionReport {
            kind: self,
            notes: self.notes(),
            rows,
        })
    }
}

impl fmt::Display for Reproduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Reproduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown reproduction target '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproductionRow {
    /// Generalized Fisher exponent, for the α sweep.
    pub alpha: Option<f64>,
    pub h: f64,
    pub tau: f64,
    pub result: std::result::Result<RowOutcome, Error>,
    pub published: Option<PublishedRow>,
    pub observed_order: Option<f64>,
}

impl ReproductionRow {
    pub fn l_inf(&self) -> Option<f64> {
        self.result.as_ref().ok().map(|o| o.errors.l_inf)
    }

    pub fn rms(&self) -> Option<f64> {
        self.result.as_ref().ok().map(|o| o.errors.rms)
    }

    /// `(computed − published) / published` for L∞.
    pub fn l_inf_deviation(&self) -> Option<f64> {
        Some((self.l_inf()? - self.published?.l_inf) / self.published?.l_inf)
    }

    pub fn rms_deviation(&self) -> Option<f64> {
        Some((self.rms()? - self.published?.rms) / self.published?.rms)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproductionReport {
    pub kind: Reproduction,
    pub notes: Vec<String>,
    pub rows: Vec<ReproductionRow>,
}

impl ReproductionReport {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.result.is_err()).count()
    }

    pub fn l_inf(&self) -> Option<Vec<f64>> {
        self.rows.iter().map(ReproductionRow::l_inf).collect()
    }
}

/// Runs the published `(h, τ)` pairs in their published order.
fn published_study(
    problem: &PdeProblem,
    published: &[PublishedRow],
    t_end: f64,
) -> Result<Vec<ReproductionRow>> {
    let mut taus: Vec<f64> = Vec::new();
    let mut hs: Vec<f64> = Vec::new();
    for r in published {
        if !taus.contains(&r.tau) {
            taus.push(r.tau);
        }
        if !hs.contains(&r.h) {
            hs.push(r.h);
        }
    }
    let table = convergence_study(problem, &hs, &taus, t_end)?;
    Ok(attach_published(table, published))
}

fn attach_published(table: ConvergenceTable, published: &[PublishedRow]) -> Vec<ReproductionRow> {
    table
        .rows
        .into_iter()
        .zip(table.observed_orders)
        .map(|(row, order)| ReproductionRow {
            alpha: None,
            published: published
                .iter()
                .find(|p| p.h == row.h && p.tau == row.tau)
                .copied(),
            h: row.h,
            tau: row.tau,
            result: row.result,
            observed_order: order,
        })
        .collect()
}

fn fig5_sweep() -> Result<Vec<ReproductionRow>> {
    FIG5_ALPHAS
        .par_iter()
        .map(|&alpha| {
            let problem = generalized_fisher(alpha)?;
            let table = convergence_study(&problem, &[FIG5_H], &[FIG5_TAU], FIG5_T_END)?;
            let row = table.rows.into_iter().next().expect("one row per alpha");
            Ok(ReproductionRow {
                alpha: Some(alpha),
                h: row.h,
                tau: row.tau,
                result: row.result,
                published: None,
                observed_order: None,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for r in Reproduction::ALL {
            assert_eq!(r.name().parse::<Reproduction>().unwrap(), r);
        }
        assert!("table4".parse::<Reproduction>().is_err());
    }

    #[test]
    fn table_shapes() {
        assert!(TABLE2.windows(2).all(|w| w[0].h == 2.0 * w[1].h));
        assert!(TABLE3.windows(2).all(|w| w[0].tau == 2.0 * w[1].tau));
        assert_eq!(TABLE1.iter().filter(|r| r.tau == 1.0 / 1000.0).count(), 5);
    }
}
