//! Run configuration: one `key = value` per line, `#` comments, strings in
//! double quotes, lists in brackets. The format is a subset of TOML and is
//! parsed as such.
//!
//! ```text
//! equation = "fitzhugh_nagumo"
//! rho = 0.75
//! a = -10
//! b = 10
//! h = 0.125
//! tau = 0.001
//! t_end = 1.0
//! snapshots = [0.5, 1.0]
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use drbem::integrator::{DEFAULT_EPSILON, DEFAULT_MAX_CORRECTOR_ITERS};
use drbem::pde::{self, PdeProblem};
use drbem::{Grid, StepConfig};
use serde::Deserialize;

/// Snapshot times must sit on the time grid to within this.
pub const SNAPSHOT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_OUTPUT_PATH: &str = "drbem-output";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{field}: {message}")]
    Invalid {
        field: &'static str,
        message: String,
    },
}

impl ConfigError {
    fn invalid(field: &'static str, message: impl Into<String>) -> Self {
        Self::Invalid {
            field,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    Fisher,
    GeneralizedFisher,
    AllenCahn,
    NewellWhitehead,
    FitzhughNagumo,
    GeneralizedFn,
}

impl Equation {
    pub const ALL: [Equation; 6] = [
        Self::Fisher,
        Self::GeneralizedFisher,
        Self::AllenCahn,
        Self::NewellWhitehead,
        Self::FitzhughNagumo,
        Self::GeneralizedFn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fisher => "fisher",
            Self::GeneralizedFisher => "generalized_fisher",
            Self::AllenCahn => "allen_cahn",
            Self::NewellWhitehead => "newell_whitehead",
            Self::FitzhughNagumo => "fitzhugh_nagumo",
            Self::GeneralizedFn => "generalized_fn",
        }
    }

    fn takes_rho(self) -> bool {
        matches!(self, Self::FitzhughNagumo | Self::GeneralizedFn)
    }

    fn takes_alpha(self) -> bool {
        self == Self::GeneralizedFisher
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Equation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|e| e.name()).collect();
                format!(
                    "unknown equation '{s}' (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

/// Spatial resolution: a node spacing or a node count, never both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resolution {
    Spacing(f64),
    Nodes(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub equation: Equation,
    pub rho: Option<f64>,
    pub alpha: Option<f64>,
    pub a: f64,
    pub b: f64,
    pub t_end: f64,
    pub resolution: Resolution,
    pub tau: f64,
    pub epsilon: f64,
    pub max_iters: usize,
    /// Sorted, without duplicates. Empty means "final time only".
    pub snapshots: Vec<f64>,
    pub output_path: PathBuf,
    pub compare_exact: bool,
    pub run_oracle: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    equation: String,
    rho: Option<f64>,
    alpha: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    t_end: f64,
    h: Option<f64>,
    n: Option<i64>,
    tau: f64,
    epsilon: Option<f64>,
    max_iters: Option<i64>,
    snapshots: Option<Vec<f64>>,
    output_path: Option<String>,
    compare_exact: Option<bool>,
    run_oracle: Option<bool>,
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
            .unwrap_or(0);
        ConfigError::Parse {
            line,
            message: e.message().to_string(),
        }
    })?;
    RunConfig::from_raw(raw)
}

pub fn load_config(path: &Path) -> Result<RunConfig, crate::CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| crate::CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_config(&text)?)
}

fn finite(field: &'static str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::invalid(
            field,
            format!("{v} is not a finite number"),
        ))
    }
}

impl RunConfig {
    fn from_raw(raw: RawConfig) -> Result<Self, ConfigError> {
        let equation: Equation = raw
            .equation
            .parse()
            .map_err(|m| ConfigError::invalid("equation", m))?;

        let rho = match (raw.rho, equation.takes_rho()) {
            (Some(_), false) => {
                return Err(ConfigError::invalid(
                    "rho",
                    format!("not a parameter of {equation}"),
                ))
            }
            (None, true) => {
                return Err(ConfigError::invalid(
                    "rho",
                    format!("required by {equation}"),
                ))
            }
            (r, _) => r.map(|v| finite("rho", v)).transpose()?,
        };
        let alpha = match (raw.alpha, equation.takes_alpha()) {
            (Some(_), false) => {
                return Err(ConfigError::invalid(
                    "alpha",
                    format!("not a parameter of {equation} (only generalized_fisher takes alpha)"),
                ))
            }
            (None, true) => {
                return Err(ConfigError::invalid(
                    "alpha",
                    format!("required by {equation}"),
                ))
            }
            (Some(v), true) if !(v > 0.0 && v.is_finite()) => {
                return Err(ConfigError::invalid(
                    "alpha",
                    format!("{v} must be positive"),
                ))
            }
            (a, _) => a,
        };

        let base = catalog_problem(equation, rho, alpha)
            .map_err(|e| ConfigError::invalid("equation", e.to_string()))?;
        let a = finite("a", raw.a.unwrap_or(base.a()))?;
        let b = finite("b", raw.b.unwrap_or(base.b()))?;
        if !(a < b) {
            return Err(ConfigError::invalid(
                "b",
                format!("b = {b} must exceed a = {a}"),
            ));
        }

        let tau = finite("tau", raw.tau)?;
        if !(tau > 0.0) {
            return Err(ConfigError::invalid(
                "tau",
                format!("{tau} must be positive"),
            ));
        }
        let t_end = finite("t_end", raw.t_end)?;
        if t_end < 0.0 {
            return Err(ConfigError::invalid(
                "t_end",
                format!("{t_end} must not be negative"),
            ));
        }
        if !on_time_grid(t_end, tau) {
            return Err(ConfigError::invalid(
                "t_end",
                format!("{t_end} is not a multiple of tau = {tau}"),
            ));
        }

        let resolution = match (raw.h, raw.n) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::invalid(
                    "h",
                    "give exactly one of h and n, not both",
                ))
            }
            (None, None) => return Err(ConfigError::invalid("h", "one of h or n is required")),
            (Some(h), None) => {
                Grid::with_spacing(a, b, finite("h", h)?)
                    .map_err(|e| ConfigError::invalid("h", e.to_string()))?;
                Resolution::Spacing(h)
            }
            (None, Some(n)) => {
                if n < 3 {
                    return Err(ConfigError::invalid(
                        "n",
                        format!("{n} nodes; need at least 3"),
                    ));
                }
                Resolution::Nodes(n as usize)
            }
        };

        let epsilon = finite("epsilon", raw.epsilon.unwrap_or(DEFAULT_EPSILON))?;
        if !(epsilon > 0.0) {
            return Err(ConfigError::invalid(
                "epsilon",
                format!("{epsilon} must be positive"),
            ));
        }
        let max_iters = match raw.max_iters {
            None => DEFAULT_MAX_CORRECTOR_ITERS,
            Some(m) if m >= 2 => m as usize,
            Some(m) => {
                return Err(ConfigError::invalid(
                    "max_iters",
                    format!("{m}; the corrector needs at least 2 solves"),
                ))
            }
        };

        let mut snapshots = raw.snapshots.unwrap_or_default();
        for &s in &snapshots {
            finite("snapshots", s)?;
            if s < 0.0 || s > t_end + SNAPSHOT_TOLERANCE {
                return Err(ConfigError::invalid(
                    "snapshots",
                    format!("time {s} lies outside [0, t_end = {t_end}]"),
                ));
            }
            if !on_time_grid(s, tau) {
                return Err(ConfigError::invalid(
                    "snapshots",
                    format!("time {s} is not a multiple of tau = {tau}"),
                ));
            }
        }
        snapshots.sort_by(f64::total_cmp);
        snapshots.dedup_by(|x, y| (*x - *y).abs() <= SNAPSHOT_TOLERANCE);

        Ok(Self {
            equation,
            rho,
            alpha,
            a,
            b,
            t_end,
            resolution,
            tau,
            epsilon,
            max_iters,
            snapshots,
            output_path: PathBuf::from(
                raw.output_path
                    .unwrap_or_else(|| DEFAULT_OUTPUT_PATH.to_string()),
            ),
            compare_exact: raw.compare_exact.unwrap_or(true),
            run_oracle: raw.run_oracle.unwrap_or(false),
        })
    }

    /// The catalog problem moved onto `[a, b]`, with a horizon that covers
    /// `t_end`.
    pub fn problem(&self) -> drbem::Result<PdeProblem> {
        let base = catalog_problem(self.equation, self.rho, self.alpha)?;
        let horizon = base.horizon().max(self.t_end);
        if base.a() == self.a && base.b() == self.b && base.horizon() == horizon {
            Ok(base)
        } else {
            base.with_domain(self.a, self.b, horizon)
        }
    }

    pub fn grid(&self) -> drbem::Result<Grid> {
        match self.resolution {
            Resolution::Spacing(h) => Grid::with_spacing(self.a, self.b, h),
            Resolution::Nodes(n) => Grid::uniform(self.a, self.b, n),
        }
    }

    pub fn step_config(&self) -> drbem::Result<StepConfig> {
        StepConfig::new(self.tau)?
            .with_epsilon(self.epsilon)?
            .with_max_corrector_iters(self.max_iters)
    }

    /// Output times: the snapshots, or `t_end` alone when none are given.
    pub fn output_times(&self) -> Vec<f64> {
        if self.snapshots.is_empty() {
            vec![self.t_end]
        } else {
            self.snapshots.clone()
        }
    }
}

fn on_time_grid(t: f64, tau: f64) -> bool {
    (t - (t / tau).round() * tau).abs() <= SNAPSHOT_TOLERANCE * t.abs().max(1.0)
}

fn catalog_problem(
    equation: Equation,
    rho: Option<f64>,
    alpha: Option<f64>,
) -> drbem::Result<PdeProblem> {
    let rho = rho.unwrap_or(f64::NAN);
    match equation {
        Equation::Fisher => Ok(pde::fisher()),
        Equation::AllenCahn => Ok(pde::allen_cahn()),
        Equation::GeneralizedFisher => pde::generalized_fisher(alpha.unwrap_or(f64::NAN)),
        Equation::NewellWhitehead => Ok(pde::newell_whitehead()),
        Equation::FitzhughNagumo => Ok(pde::fitzhugh_nagumo(rho)),
        Equation::GeneralizedFn => pde::generalized_fitzhugh_nagumo(rho),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = "equation = \"fitzhugh_nagumo\"\nrho = 0.75\na = -10\nb = 10\n\
                         h = 0.125\ntau = 0.001\nt_end = 1.0\n";

    #[test]
    fn basic_config_round_trips() {
        let cfg = parse_config(BASIC).unwrap();
        assert_eq!(cfg.equation, Equation::FitzhughNagumo);
        assert_eq!(cfg.rho, Some(0.75));
        assert_eq!((cfg.a, cfg.b), (-10.0, 10.0));
        assert_eq!(cfg.resolution, Resolution::Spacing(0.125));
        assert_eq!(cfg.epsilon, DEFAULT_EPSILON);
        assert_eq!(cfg.max_iters, DEFAULT_MAX_CORRECTOR_ITERS);
        assert!(cfg.compare_exact && !cfg.run_oracle);
        assert_eq!(cfg.output_times(), vec![1.0]);
        assert_eq!(cfg.grid().unwrap().len(), 161);
    }

    #[test]
    fn comments_and_defaults_for_domain() {
        let cfg = parse_config(
            "# Fisher\nequation = \"fisher\" # alpha = 1\nn = 17\ntau = 0.01\nt_end = 0.5\n",
        )
        .unwrap();
        assert_eq!((cfg.a, cfg.b), (-2.0, 2.0));
        assert_eq!(cfg.grid().unwrap().len(), 17);
    }

    #[test]
    fn snapshot_off_the_time_grid_is_rejected() {
        let text = format!("{BASIC}snapshots = [0.0005]\n");
        assert!(matches!(
            parse_config(&text),
            Err(ConfigError::Invalid {
                field: "snapshots",
                ..
            })
        ));
    }

    #[test]
    fn alpha_only_belongs_to_generalized_fisher() {
        let text = "equation = \"fisher\"\nalpha = 2\nn = 9\ntau = 0.01\nt_end = 1\n";
        assert!(matches!(
            parse_config(text),
            Err(ConfigError::Invalid { field: "alpha", .. })
        ));
        let text = "equation = \"generalized_fisher\"\nn = 9\ntau = 0.01\nt_end = 1\n";
        assert!(matches!(
            parse_config(text),
            Err(ConfigError::Invalid { field: "alpha", .. })
        ));
    }

    #[test]
    fn rho_is_rejected_where_it_does_not_apply() {
        let text = "equation = \"newell_whitehead\"\nrho = 1\nn = 9\ntau = 0.01\nt_end = 1\n";
        assert!(matches!(
            parse_config(text),
            Err(ConfigError::Invalid { field: "rho", .. })
        ));
    }

    #[test]
    fn exactly_one_of_h_and_n() {
        let both = "equation = \"fisher\"\nh = 0.5\nn = 9\ntau = 0.01\nt_end = 1\n";
        let neither = "equation = \"fisher\"\ntau = 0.01\nt_end = 1\n";
        for text in [both, neither] {
            assert!(matches!(
                parse_config(text),
                Err(ConfigError::Invalid { field: "h", .. })
            ));
        }
    }

    #[test]
    fn unknown_key_reports_its_line() {
        let text = "equation = \"fisher\"\nn = 9\nspeed = 3\ntau = 0.01\nt_end = 1\n";
        match parse_config(text) {
            Err(ConfigError::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("speed"), "{message}");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_line_reports_its_line() {
        let text = "equation = \"fisher\"\nn = 9\ntau 0.01\n";
        assert!(matches!(
            parse_config(text),
            Err(ConfigError::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn unknown_equation_names_the_field() {
        let text = "equation = \"burgers\"\nn = 9\ntau = 0.01\nt_end = 1\n";
        assert!(matches!(
            parse_config(text),
            Err(ConfigError::Invalid {
                field: "equation",
                ..
            })
        ));
    }

    #[test]
    fn custom_domain_moves_the_problem() {
        let text =
            "equation = \"newell_whitehead\"\na = -5\nb = 5\nh = 0.5\ntau = 0.01\nt_end = 0.5\n";
        let problem = parse_config(text).unwrap().problem().unwrap();
        assert_eq!((problem.a(), problem.b()), (-5.0, 5.0));
    }
}
