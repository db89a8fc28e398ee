//! The model problem `u_t + ν(t) u_x − μ(t) u_xx − η(t) F(u) = 0` on
//! `[a, b] × [0, T]` with Dirichlet data, and the catalog of named equations
//! with traveling-wave exact solutions.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type FieldFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Tolerance for `initial(a) == bc_left(0)` and `initial(b) == bc_right(0)`.
pub const COMPATIBILITY_TOLERANCE: f64 = 1e-10;
/// `|μ(t)|` at or below this is treated as a zero of the diffusion coefficient.
pub const MU_ZERO_TOLERANCE: f64 = 1e-12;

/// Time-dependent coefficients `ν(t)` (advection), `μ(t)` (diffusion) and
/// `η(t)` (reaction).
#[derive(Clone)]
pub struct CoefficientSet {
    nu: ScalarFn,
    mu: ScalarFn,
    eta: ScalarFn,
    time_independent: bool,
}

impl CoefficientSet {
    pub fn constant(nu: f64, mu: f64, eta: f64) -> Self {
        Self {
            nu: Arc::new(move |_| nu),
            mu: Arc::new(move |_| mu),
            eta: Arc::new(move |_| eta),
            time_independent: true,
        }
    }

    pub fn time_dependent(
        nu: impl Fn(f64) -> f64 + Send + Sync + 'static,
        mu: impl Fn(f64) -> f64 + Send + Sync + 'static,
        eta: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            nu: Arc::new(nu),
            mu: Arc::new(mu),
            eta: Arc::new(eta),
            time_independent: false,
        }
    }

    pub fn nu(&self, t: f64) -> f64 {
        (self.nu)(t)
    }

    pub fn mu(&self, t: f64) -> f64 {
        (self.mu)(t)
    }

    pub fn eta(&self, t: f64) -> f64 {
        (self.eta)(t)
    }

    /// Whether all three coefficients are constant in time. Solvers use this
    /// to reuse one factorization across every time level.
    pub fn is_time_independent(&self) -> bool {
        self.time_independent
    }
}

impl fmt::Debug for CoefficientSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientSet")
            .field("nu(0)", &self.nu(0.0))
            .field("mu(0)", &self.mu(0.0))
            .field("eta(0)", &self.eta(0.0))
            .field("time_independent", &self.time_independent)
            .finish()
    }
}

/// Reaction `F(u) = λ u + F_n(u)`, split into a linear part treated implicitly
/// and a nonlinear remainder that the corrector lags.
#[derive(Clone)]
pub struct ReactionTerm {
    linear_slope: f64,
    nonlinear: ScalarFn,
    full: ScalarFn,
}

impl ReactionTerm {
    /// `full` is kept as an independent closure (usually the factored form)
    /// so the split can be checked against it.
    pub fn new(
        linear_slope: f64,
        nonlinear: impl Fn(f64) -> f64 + Send + Sync + 'static,
        full: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            linear_slope,
            nonlinear: Arc::new(nonlinear),
            full: Arc::new(full),
        }
    }

    pub fn zero() -> Self {
        Self::new(0.0, |_| 0.0, |_| 0.0)
    }

    pub fn linear(slope: f64) -> Self {
        Self::new(slope, |_| 0.0, move |u| slope * u)
    }

    /// The cubic `u (1 − u)(ρ − u) = ρu − (1 + ρ)u² + u³`.
    pub fn cubic_nagumo(rho: f64) -> Self {
        Self::new(
            rho,
            move |u| -(1.0 + rho) * u * u + u * u * u,
            move |u| u * (1.0 - u) * (rho - u),
        )
    }

    /// `u (1 − u^α) = u − u^{α+1}`. For non-integer `α` the power is only
    /// defined for `u ≥ 0`; negative arguments evaluate to NaN, which the
    /// solvers report as [`Error::ReactionDomain`].
    pub fn generalized_logistic(alpha: f64) -> Self {
        Self::new(
            1.0,
            move |u| -u * real_power(u, alpha),
            move |u| u * (1.0 - real_power(u, alpha)),
        )
    }

    /// `−F`, with the split negated accordingly.
    pub fn negated(&self) -> Self {
        let nonlinear = self.nonlinear.clone();
        let full = self.full.clone();
        Self {
            linear_slope: -self.linear_slope,
            nonlinear: Arc::new(move |u| -nonlinear(u)),
            full: Arc::new(move |u| -full(u)),
        }
    }

    pub fn linear_slope(&self) -> f64 {
        self.linear_slope
    }

    pub fn nonlinear(&self, u: f64) -> f64 {
        (self.nonlinear)(u)
    }

    pub fn full(&self, u: f64) -> f64 {
        (self.full)(u)
    }

    /// Checks `full = λu + F_n` on `[−2, 2]` and that `F_n` has neither a
    /// constant nor a linear part at `u = 0`.
    pub fn validate(&self) -> Result<()> {
        const SAMPLES: usize = 401;
        for k in 0..SAMPLES {
            let u = -2.0 + 4.0 * k as f64 / (SAMPLES - 1) as f64;
            let full = self.full(u);
            let split = self.linear_slope * u + self.nonlinear(u);
            match (full.is_finite(), split.is_finite()) {
                (true, true) => {
                    if (full - split).abs() > 1e-12 * full.abs().max(1.0) {
                        return Err(Error::InvalidProblem(format!(
                            "reaction split inconsistent at u = {u}: full {full}, \
                             linear + nonlinear {split}"
                        )));
                    }
                }
                (false, false) => {}
                _ => {
                    return Err(Error::InvalidProblem(format!(
                        "reaction split has mismatched domain at u = {u}"
                    )));
                }
            }
        }
        let at_zero = self.nonlinear(0.0);
        if at_zero.abs() > 1e-14 {
            return Err(Error::InvalidProblem(format!(
                "nonlinear reaction part is {at_zero} at u = 0"
            )));
        }
        // The slope of F_n at 0 must vanish. One-sided quotients are used so
        // that powers defined only for u ≥ 0 are still checkable.
        let slope = |d: f64| {
            let right = (self.nonlinear(d) - at_zero) / d;
            let left = (at_zero - self.nonlinear(-d)) / d;
            if left.is_finite() {
                right.abs().max(left.abs())
            } else {
                right.abs()
            }
        };
        let (coarse, fine) = (slope(1e-4), slope(1e-8));
        if fine > 1e-9 && fine > 0.99 * coarse {
            return Err(Error::InvalidProblem(format!(
                "nonlinear reaction part has nonzero slope {fine:e} at u = 0; \
                 move it into the linear slope"
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for ReactionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReactionTerm")
            .field("linear_slope", &self.linear_slope)
            .finish_non_exhaustive()
    }
}

/// `u^p`, using integer powers when `p` is integral so negative `u` stays
/// valid; otherwise NaN for `u < 0`.
pub fn real_power(u: f64, p: f64) -> f64 {
    if p.fract() == 0.0 && p.abs() < i32::MAX as f64 {
        u.powi(p as i32)
    } else if u >= 0.0 {
        u.powf(p)
    } else {
        f64::NAN
    }
}

/// A fully specified initial-boundary value problem.
#[derive(Clone)]
pub struct PdeProblem {
    name: String,
    coeffs: CoefficientSet,
    reaction: ReactionTerm,
    a: f64,
    b: f64,
    horizon: f64,
    initial: ScalarFn,
    bc_left: ScalarFn,
    bc_right: ScalarFn,
    exact: Option<FieldFn>,
}

impl fmt::Debug for PdeProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PdeProblem")
            .field("name", &self.name)
            .field("coeffs", &self.coeffs)
            .field("reaction", &self.reaction)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("horizon", &self.horizon)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

impl PdeProblem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        coeffs: CoefficientSet,
        reaction: ReactionTerm,
        a: f64,
        b: f64,
        horizon: f64,
        initial: impl Fn(f64) -> f64 + Send + Sync + 'static,
        bc_left: impl Fn(f64) -> f64 + Send + Sync + 'static,
        bc_right: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let problem = Self {
            name: name.into(),
            coeffs,
            reaction,
            a,
            b,
            horizon,
            initial: Arc::new(initial),
            bc_left: Arc::new(bc_left),
            bc_right: Arc::new(bc_right),
            exact: None,
        };
        problem.validate()?;
        Ok(problem)
    }

    /// Builds a problem whose initial and boundary data are sampled from a
    /// known exact solution.
    pub fn from_exact(
        name: impl Into<String>,
        coeffs: CoefficientSet,
        reaction: ReactionTerm,
        a: f64,
        b: f64,
        horizon: f64,
        exact: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let exact: FieldFn = Arc::new(exact);
        let (e0, e1, e2) = (exact.clone(), exact.clone(), exact.clone());
        let problem = Self {
            name: name.into(),
            coeffs,
            reaction,
            a,
            b,
            horizon,
            initial: Arc::new(move |x| e0(x, 0.0)),
            bc_left: Arc::new(move |t| e1(a, t)),
            bc_right: Arc::new(move |t| e2(b, t)),
            exact: Some(exact),
        };
        problem.validate()?;
        Ok(problem)
    }

    /// Moves the problem to a new space-time window. Initial and boundary
    /// data must come from an exact solution for this to be meaningful.
    pub fn with_domain(&self, a: f64, b: f64, horizon: f64) -> Result<Self> {
        let exact = self.exact.clone().ok_or(Error::MissingExact)?;
        Self::from_exact(
            self.name.clone(),
            self.coeffs.clone(),
            self.reaction.clone(),
            a,
            b,
            horizon,
            move |x, t| exact(x, t),
        )
    }

    /// Same data and domain, different reaction term. The exact solution is
    /// carried over unchanged.
    pub fn with_reaction(&self, reaction: ReactionTerm) -> Result<Self> {
        let problem = Self {
            reaction,
            ..self.clone()
        };
        problem.validate()?;
        Ok(problem)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.b.is_finite() && self.a < self.b) {
            return Err(Error::InvalidProblem(format!(
                "domain [{}, {}] must satisfy a < b",
                self.a, self.b
            )));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::InvalidProblem(format!(
                "horizon T = {} must be positive",
                self.horizon
            )));
        }
        let left = (self.initial(self.a) - self.bc_left(0.0)).abs();
        let right = (self.initial(self.b) - self.bc_right(0.0)).abs();
        if !(left <= COMPATIBILITY_TOLERANCE && right <= COMPATIBILITY_TOLERANCE) {
            return Err(Error::InvalidProblem(format!(
                "initial and boundary data disagree at the corners ({left:e}, {right:e})"
            )));
        }
        self.check_diffusion_on(0.0, self.horizon)?;
        self.reaction.validate()
    }

    /// Rejects windows `[t0, t1]` on which `μ` vanishes or changes sign,
    /// detected by sampling.
    pub fn check_diffusion_on(&self, t0: f64, t1: f64) -> Result<()> {
        const SAMPLES: usize = 2049;
        let mut sign = 0.0;
        for k in 0..SAMPLES {
            let t = t0 + (t1 - t0) * k as f64 / (SAMPLES - 1) as f64;
            let mu = self.coeffs.mu(t);
            if !(mu.abs() > MU_ZERO_TOLERANCE) {
                return Err(Error::DegenerateDiffusion { t, mu });
            }
            if sign != 0.0 && mu.signum() != sign {
                return Err(Error::DegenerateDiffusion { t, mu });
            }
            sign = mu.signum();
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coeffs(&self) -> &CoefficientSet {
        &self.coeffs
    }

    pub fn reaction(&self) -> &ReactionTerm {
        &self.reaction
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn initial(&self, x: f64) -> f64 {
        (self.initial)(x)
    }

    pub fn bc_left(&self, t: f64) -> f64 {
        (self.bc_left)(t)
    }

    pub fn bc_right(&self, t: f64) -> f64 {
        (self.bc_right)(t)
    }

    pub fn exact(&self) -> Option<&FieldFn> {
        self.exact.as_ref()
    }

    pub fn exact_at(&self, x: f64, t: f64) -> Option<f64> {
        self.exact.as_ref().map(|f| f(x, t))
    }

    /// Left-hand side `u_t + ν u_x − μ u_xx − η F(u)` for given derivative
    /// values.
    pub fn operator(&self, t: f64, u: f64, u_t: f64, u_x: f64, u_xx: f64) -> f64 {
        u_t + self.coeffs.nu(t) * u_x
            - self.coeffs.mu(t) * u_xx
            - self.coeffs.eta(t) * self.reaction.full(u)
    }
}

/// Nagumo equation `u_t = u_xx − u(1 − u)(ρ − u)` on `[−10, 10] × [0, 100]`
/// with the kink `½ + ½ tanh((x − ct) / (2√2))`, `c = (2ρ − 1)/√2`.
///
/// `ρ = −1` gives the real Newell–Whitehead equation.
pub fn fitzhugh_nagumo(rho: f64) -> PdeProblem {
    let name = if rho == -1.0 {
        "newell_whitehead".to_string()
    } else {
        format!("fitzhugh_nagumo(rho={rho})")
    };
    PdeProblem::from_exact(
        name,
        CoefficientSet::constant(0.0, 1.0, 1.0),
        ReactionTerm::cubic_nagumo(rho).negated(),
        -10.0,
        10.0,
        100.0,
        move |x, t| fitzhugh_nagumo_exact(rho, x, t),
    )
    .expect("catalog entry is valid for every rho")
}

pub fn newell_whitehead() -> PdeProblem {
    fitzhugh_nagumo(-1.0)
}

pub fn fitzhugh_nagumo_exact(rho: f64, x: f64, t: f64) -> f64 {
    let speed = (2.0 * rho - 1.0) / std::f64::consts::SQRT_2;
    0.5 + 0.5 * ((x - speed * t) / (2.0 * std::f64::consts::SQRT_2)).tanh()
}

/// FitzHugh–Nagumo with time-dependent coefficients on `[−1, 1] × [0, 1]`:
/// `u_t + cos(t) u_x − cos(t) u_xx − 2 cos(t) F(u) = 0`.
///
/// The traveling wave `ρ/2 + (ρ/2) tanh((ρ/2)(x − (3 − ρ) sin t))` solves
/// this with `F(u) = −u(1 − u)(ρ − u)`, the same reaction sign as the
/// constant-coefficient Nagumo equation. With `+u(1 − u)(ρ − u)` the wave is
/// not a solution (see [`generalized_fitzhugh_nagumo_as_printed`]).
pub fn generalized_fitzhugh_nagumo(rho: f64) -> Result<PdeProblem> {
    PdeProblem::from_exact(
        format!("generalized_fn(rho={rho})"),
        CoefficientSet::time_dependent(f64::cos, f64::cos, |t| 2.0 * t.cos()),
        ReactionTerm::cubic_nagumo(rho).negated(),
        -1.0,
        1.0,
        1.0,
        move |x, t| generalized_fitzhugh_nagumo_exact(rho, x, t),
    )
}

/// The same equation with `F(u) = +u(1 − u)(ρ − u)`, kept to document that the
/// traveling wave does not satisfy it.
pub fn generalized_fitzhugh_nagumo_as_printed(rho: f64) -> Result<PdeProblem> {
    generalized_fitzhugh_nagumo(rho)?.with_reaction(ReactionTerm::cubic_nagumo(rho))
}

pub fn generalized_fitzhugh_nagumo_exact(rho: f64, x: f64, t: f64) -> f64 {
    0.5 * rho + 0.5 * rho * (0.5 * rho * (x - (3.0 - rho) * t.sin())).tanh()
}

/// Generalized Fisher equation `u_t = u_xx + u(1 − u^α)` on `[−2, 2] × [0, 1]`.
/// `α = 1` is Fisher's equation, `α = 2` Allen–Cahn.
pub fn generalized_fisher(alpha: f64) -> Result<PdeProblem> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidProblem(format!(
            "generalized Fisher exponent alpha = {alpha} must be positive"
        )));
    }
    let name = match alpha {
        1.0 => "fisher".to_string(),
        2.0 => "allen_cahn".to_string(),
        a => format!("generalized_fisher(alpha={a})"),
    };
    PdeProblem::from_exact(
        name,
        CoefficientSet::constant(0.0, 1.0, 1.0),
        ReactionTerm::generalized_logistic(alpha),
        -2.0,
        2.0,
        1.0,
        move |x, t| generalized_fisher_exact(alpha, x, t),
    )
}

pub fn fisher() -> PdeProblem {
    generalized_fisher(1.0).expect("alpha = 1 is valid")
}

pub fn allen_cahn() -> PdeProblem {
    generalized_fisher(2.0).expect("alpha = 2 is valid")
}

/// `{½ tanh[−α/(2s)(x − (α+4)/s · t) + ½] + ½}^{2/α}` with `s = √(2α + 4)`.
///
/// The `+½` inside the bracket only shifts the wave; the radical must be
/// `√(2α + 4)` for the profile to solve the equation.
pub fn generalized_fisher_exact(alpha: f64, x: f64, t: f64) -> f64 {
    fisher_wave(alpha, (2.0 * alpha + 4.0).sqrt(), x, t)
}

/// The commonly quoted variant with `s = √(α + 4)`; it does not satisfy the
/// equation and is kept only so the residual suite can demonstrate that.
pub fn generalized_fisher_exact_as_printed(alpha: f64, x: f64, t: f64) -> f64 {
    fisher_wave(alpha, (alpha + 4.0).sqrt(), x, t)
}

fn fisher_wave(alpha: f64, s: f64, x: f64, t: f64) -> f64 {
    let arg = -alpha / (2.0 * s) * (x - (alpha + 4.0) / s * t) + 0.5;
    (0.5 * arg.tanh() + 0.5).powf(2.0 / alpha)
}

/// Evaluates `u_t + ν u_x − μ u_xx − η F(u)` for `field` at `(x, t)` using
/// fourth-order central differences in `x` and a second-order central
/// difference in `t`, both with the same `step`.
pub fn residual_check(
    problem: &PdeProblem,
    field: &dyn Fn(f64, f64) -> f64,
    x: f64,
    t: f64,
    step: f64,
) -> Result<f64> {
    residual_check_with_steps(problem, field, x, t, step, step)
}

/// [`residual_check`] with independent space and time steps, used to
/// separate the two truncation orders.
pub fn residual_check_with_steps(
    problem: &PdeProblem,
    field: &dyn Fn(f64, f64) -> f64,
    x: f64,
    t: f64,
    dx: f64,
    dt: f64,
) -> Result<f64> {
    if !(dx > 0.0 && dt > 0.0) {
        return Err(Error::StencilOutOfDomain(format!(
            "steps must be positive (dx = {dx}, dt = {dt})"
        )));
    }
    if x - 2.0 * dx < problem.a() || x + 2.0 * dx > problem.b() {
        return Err(Error::StencilOutOfDomain(format!(
            "x = {x} ± {} leaves [{}, {}]",
            2.0 * dx,
            problem.a(),
            problem.b()
        )));
    }
    if !(t - 2.0 * dt > 0.0 && t + 2.0 * dt < problem.horizon()) {
        return Err(Error::StencilOutOfDomain(format!(
            "t = {t} ± {} leaves (0, {})",
            2.0 * dt,
            problem.horizon()
        )));
    }
    let f = |dx_mult: f64| field(x + dx_mult * dx, t);
    let (m2, m1, c, p1, p2) = (f(-2.0), f(-1.0), f(0.0), f(1.0), f(2.0));
    let u_x = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * dx);
    let u_xx = (-p2 + 16.0 * p1 - 30.0 * c + 16.0 * m1 - m2) / (12.0 * dx * dx);
    let u_t = (field(x, t + dt) - field(x, t - dt)) / (2.0 * dt);
    Ok(problem.operator(t, c, u_t, u_x, u_xx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nagumo_exact_is_one_half_at_origin() {
        assert_eq!(fitzhugh_nagumo(0.75).exact_at(0.0, 0.0), Some(0.5));
    }

    #[test]
    fn newell_whitehead_equilibria() {
        let p = newell_whitehead();
        assert_eq!(p.reaction().full(0.0), 0.0);
        assert_eq!(p.reaction().full(1.0), 0.0);
        assert_eq!(p.name(), "newell_whitehead");
    }

    #[test]
    fn nagumo_split_is_negated_cubic() {
        let r = fitzhugh_nagumo(0.75).reaction().clone();
        assert_eq!(r.linear_slope(), -0.75);
        let u = 0.3_f64;
        let expected = 1.75 * u * u - u * u * u;
        assert!((r.nonlinear(u) - expected).abs() < 1e-15);
    }

    #[test]
    fn generalized_fn_exact_values() {
        let p = generalized_fitzhugh_nagumo(1.0).unwrap();
        assert_eq!(p.exact_at(0.0, 0.0), Some(0.5));
        let far = generalized_fitzhugh_nagumo_exact(1.5, 1e3, 0.0);
        assert!((far - 1.5).abs() < 1e-15);
    }

    #[test]
    fn generalized_fn_rejects_horizon_through_mu_zero() {
        let p = generalized_fitzhugh_nagumo(1.0).unwrap();
        assert!(p.with_domain(-1.0, 1.0, 1.5).is_ok());
        let half_pi = std::f64::consts::FRAC_PI_2;
        assert!(matches!(
            p.with_domain(-1.0, 1.0, half_pi),
            Err(Error::DegenerateDiffusion { .. })
        ));
        assert!(matches!(
            p.with_domain(-1.0, 1.0, 2.0),
            Err(Error::DegenerateDiffusion { .. })
        ));
    }

    #[test]
    fn fisher_and_allen_cahn_reactions() {
        assert_eq!(fisher().reaction().full(1.0), 0.0);
        let ac = allen_cahn();
        for u in [-1.5, -0.2, 0.0, 0.4, 1.3] {
            assert!((ac.reaction().nonlinear(u) + u * u * u).abs() < 1e-15);
        }
        assert_eq!(ac.name(), "allen_cahn");
    }

    #[test]
    fn generalized_fisher_rejects_nonpositive_alpha() {
        assert!(generalized_fisher(0.0).is_err());
        assert!(generalized_fisher(-1.0).is_err());
        assert!(generalized_fisher(f64::NAN).is_err());
    }

    #[test]
    fn non_integer_power_is_undefined_for_negative_u() {
        let r = ReactionTerm::generalized_logistic(1.5);
        assert!(r.nonlinear(-0.1).is_nan());
        assert!(r.nonlinear(0.1).is_finite());
        assert_eq!(real_power(-2.0, 3.0), -8.0);
        assert!(r.validate().is_ok());
    }

    #[test]
    fn split_validation_catches_inconsistency() {
        let bad = ReactionTerm::new(1.0, |u| u * u, |u| u);
        assert!(bad.validate().is_err());
        // Linear leftover inside the nonlinear part.
        let leaky = ReactionTerm::new(0.0, |u| 0.5 * u + u * u, |u| 0.5 * u + u * u);
        assert!(leaky.validate().is_err());
        assert!(ReactionTerm::cubic_nagumo(0.3).validate().is_ok());
    }

    #[test]
    fn incompatible_corner_data_is_rejected() {
        let err = PdeProblem::new(
            "bad",
            CoefficientSet::constant(0.0, 1.0, 0.0),
            ReactionTerm::zero(),
            0.0,
            1.0,
            1.0,
            |x| x,
            |_| 0.5,
            |_| 1.0,
        );
        assert!(matches!(err, Err(Error::InvalidProblem(_))));
    }

    #[test]
    fn degenerate_domain_is_rejected() {
        let p = fitzhugh_nagumo(0.5);
        assert!(p.with_domain(1.0, 1.0, 1.0).is_err());
        assert!(p.with_domain(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn residual_of_constant_states_is_exactly_zero() {
        let p = fisher();
        for value in [0.0, 1.0] {
            let r = residual_check(&p, &move |_, _| value, 0.0, 0.5, 1e-2).unwrap();
            assert_eq!(r, 0.0);
        }
    }

    #[test]
    fn residual_stencil_must_fit() {
        let p = fisher();
        let field = |x: f64, t: f64| x + t;
        assert!(matches!(
            residual_check(&p, &field, 1.99, 0.5, 1e-2),
            Err(Error::StencilOutOfDomain(_))
        ));
        assert!(matches!(
            residual_check(&p, &field, 0.0, 0.01, 1e-2),
            Err(Error::StencilOutOfDomain(_))
        ));
        assert!(residual_check(&p, &field, 0.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn nagumo_residual_drops_fourfold_when_step_halves() {
        let p = fitzhugh_nagumo(0.75);
        let exact = p.exact().unwrap().clone();
        let field = move |x: f64, t: f64| exact(x, t);
        let coarse = residual_check(&p, &field, 0.3, 0.5, 1e-2).unwrap().abs();
        let fine = residual_check(&p, &field, 0.3, 0.5, 5e-3).unwrap().abs();
        assert!(coarse / fine >= 4.0 * 0.95, "ratio {}", coarse / fine);
    }

    #[test]
    fn printed_generalized_fn_sign_is_not_satisfied() {
        let p = generalized_fitzhugh_nagumo_as_printed(1.0).unwrap();
        let exact = p.exact().unwrap().clone();
        let field = move |x: f64, t: f64| exact(x, t);
        let r = residual_check(&p, &field, 0.3, 0.5, 1e-3).unwrap();
        assert!(r.abs() > 1e-2);
    }
}
