//! Hazard models: parametric families, two-component mixtures and
//! user-written expressions, with proportional covariate effects and
//! time-dependent effects.
//!
//! A [`HazardModel`] is a declarative description. [`HazardModel::bind`]
//! validates it against a covariate schema and a [`Clock`] and produces a
//! [`BoundHazard`], which evaluates hazards, cumulative hazards and their
//! inverse for individual covariate rows.
//!
//! With linear predictor `xβ`, time-dependent predictor `xτ` and tde time
//! function `w`, hazard-scale kernels give `h(t) = h₀(t)·exp(xβ + xτ·w(t))`
//! and cumulative-scale kernels give `H(t) = Λ₀(t)·exp(xβ + xτ·w(t))`.
//! Parametric kernels default to `w(t) = log t` (exponential, Weibull) or
//! `w(t) = t` (Gompertz, mixtures); user kernels default to `w(t) = t`.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::expr::{self, CompiledExpr, ExprAst, ExprError};
use crate::math;
use crate::quad::{self, GradedRule};
use crate::rootfind::{self, RootError, RootOutcome};

/// Below this `|γ·t|` the Gompertz cumulative hazard uses its Taylor series.
const GOMPERTZ_SERIES_CUTOFF: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Exponential,
    Weibull,
    Gompertz,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Exponential => "exponential",
            Family::Weibull => "weibull",
            Family::Gompertz => "gompertz",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "exponential" | "exp" => Some(Family::Exponential),
            "weibull" | "weib" => Some(Family::Weibull),
            "gompertz" | "gomp" => Some(Family::Gompertz),
            _ => None,
        }
    }
}

/// One parametric baseline in the proportional hazards metric.
///
/// Exponential: `h = λ`. Weibull: `h = λγt^(γ-1)`. Gompertz: `h = λe^(γt)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parametric {
    pub family: Family,
    pub lambda: f64,
    /// Absent for the exponential.
    pub gamma: Option<f64>,
}

impl Parametric {
    pub fn exponential(lambda: f64) -> Self {
        Self {
            family: Family::Exponential,
            lambda,
            gamma: None,
        }
    }

    pub fn weibull(lambda: f64, gamma: f64) -> Self {
        Self {
            family: Family::Weibull,
            lambda,
            gamma: Some(gamma),
        }
    }

    pub fn gompertz(lambda: f64, gamma: f64) -> Self {
        Self {
            family: Family::Gompertz,
            lambda,
            gamma: Some(gamma),
        }
    }

    fn shape(&self) -> f64 {
        self.gamma.unwrap_or(1.0)
    }

    fn violations(&self, out: &mut Vec<String>, label: &str) {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            out.push(format!("{label}lambda must be positive"));
        }
        match (self.family, self.gamma) {
            (Family::Exponential, Some(_)) => {
                out.push(format!("{label}exponential takes no gamma"));
            }
            (Family::Weibull | Family::Gompertz, None) => {
                out.push(format!("{label}{} requires gamma", self.family.name()));
            }
            (Family::Weibull, Some(g)) if !(g > 0.0 && g.is_finite()) => {
                out.push(format!("{label}weibull gamma must be positive"));
            }
            (Family::Gompertz, Some(g)) if !g.is_finite() => {
                out.push(format!("{label}gompertz gamma must be finite"));
            }
            _ => {}
        }
    }

    fn hazard(&self, s: f64) -> f64 {
        match self.family {
            Family::Exponential => self.lambda,
            Family::Weibull => {
                let g = self.shape();
                self.lambda * g * math::powf(s, g - 1.0)
            }
            Family::Gompertz => self.lambda * math::exp(self.shape() * s),
        }
    }

    fn cumhaz(&self, s: f64) -> f64 {
        match self.family {
            Family::Exponential => self.lambda * s,
            Family::Weibull => self.lambda * math::powf(s, self.shape()),
            Family::Gompertz => self.lambda * gompertz_integral(self.shape(), s),
        }
    }
}

/// `∫₀ˢ e^(g·u) du`.
fn gompertz_integral(g: f64, s: f64) -> f64 {
    let gs = g * s;
    if gs.abs() < GOMPERTZ_SERIES_CUTOFF {
        s * (1.0 + 0.5 * gs + gs * gs / 6.0)
    } else {
        math::expm1(gs) / g
    }
}

/// Inverse of [`gompertz_integral`] in `s`; infinite when `x` is at or above
/// the plateau of a negative-shape curve.
fn gompertz_integral_inverse(g: f64, x: f64) -> f64 {
    let gx = g * x;
    if gx <= -1.0 {
        f64::INFINITY
    } else if gx.abs() < GOMPERTZ_SERIES_CUTOFF {
        x * (1.0 - 0.5 * gx + gx * gx / 3.0)
    } else {
        math::ln1p(gx) / g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UserScale {
    Hazard,
    LogHazard,
    CumHazard,
    LogCumHazard,
}

impl UserScale {
    pub fn is_cumulative(self) -> bool {
        matches!(self, UserScale::CumHazard | UserScale::LogCumHazard)
    }

    pub fn name(self) -> &'static str {
        match self {
            UserScale::Hazard => "hazard",
            UserScale::LogHazard => "loghazard",
            UserScale::CumHazard => "chazard",
            UserScale::LogCumHazard => "logchazard",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    Parametric(Parametric),
    /// `S₀(t) = p·S₁(t) + (1-p)·S₂(t)`; both components share `family`.
    Mixture {
        family: Family,
        pmix: f64,
        lambdas: Vec<f64>,
        gammas: Vec<f64>,
    },
    User { scale: UserScale, expr: ExprAst },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovariateEffect {
    pub name: String,
    pub coef: f64,
}

impl CovariateEffect {
    pub fn new(name: impl Into<String>, coef: f64) -> Self {
        Self {
            name: name.into(),
            coef,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TdeSpec {
    pub effects: Vec<CovariateEffect>,
    /// `None` selects the kernel's canonical time function.
    pub time_function: Option<ExprAst>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HazardModel {
    pub kernel: Kernel,
    pub covariates: Vec<CovariateEffect>,
    pub tde: Option<TdeSpec>,
    pub gl_order: usize,
}

/// Timescale of a transition hazard: measured from the time origin, or from
/// entry into the current state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Clock {
    #[default]
    Forward,
    Reset,
}

#[derive(Debug, Clone, PartialEq)]
pub enum HazardError {
    Invalid(Vec<String>),
    Expr(ExprError),
    /// Hazard values requested from a cumulative-scale kernel.
    CumulativeScale,
    /// A Weibull-type tde pushed the effective shape to `shape ≤ 0`.
    NonIntegrable { shape: f64 },
    NonFinite { t: f64, value: f64 },
    NegativeHazard { t: f64, value: f64 },
    NoConvergence { lower: f64, upper: f64 },
    InvalidInterval { from: f64, to: f64 },
}

impl fmt::Display for HazardError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HazardError::Invalid(v) => write!(f, "invalid hazard model: {}", v.join("; ")),
            HazardError::Expr(e) => e.fmt(f),
            HazardError::CumulativeScale => {
                f.write_str("hazard values are not available for a cumulative-scale user function")
            }
            HazardError::NonIntegrable { shape } => write!(
                f,
                "time-dependent effect gives effective shape {shape} <= 0; the hazard is not integrable at 0"
            ),
            HazardError::NonFinite { t, value } => {
                write!(f, "non-finite hazard value {value} at t = {t}")
            }
            HazardError::NegativeHazard { t, value } => {
                write!(f, "negative hazard value {value} at t = {t}")
            }
            HazardError::NoConvergence { lower, upper } => write!(
                f,
                "root finder did not converge (bracket [{lower}, {upper}])"
            ),
            HazardError::InvalidInterval { from, to } => {
                write!(f, "invalid interval: {from} to {to}")
            }
        }
    }
}

impl core::error::Error for HazardError {}

impl From<ExprError> for HazardError {
    fn from(e: ExprError) -> Self {
        HazardError::Expr(e)
    }
}

impl From<RootError<HazardError>> for HazardError {
    fn from(e: RootError<HazardError>) -> Self {
        match e {
            RootError::Eval(e) => e,
            RootError::NonFinite { t, value } => HazardError::NonFinite { t, value },
            RootError::NoConvergence { lower, upper } => HazardError::NoConvergence { lower, upper },
            RootError::InvalidBracket { lower, cap } => HazardError::InvalidInterval { from: lower, to: cap },
        }
    }
}

impl HazardModel {
    pub fn new(kernel: Kernel) -> Self {
        Self {
            kernel,
            covariates: Vec::new(),
            tde: None,
            gl_order: quad::DEFAULT_ORDER,
        }
    }

    pub fn parametric(p: Parametric) -> Self {
        Self::new(Kernel::Parametric(p))
    }

    pub fn exponential(lambda: f64) -> Self {
        Self::parametric(Parametric::exponential(lambda))
    }

    pub fn weibull(lambda: f64, gamma: f64) -> Self {
        Self::parametric(Parametric::weibull(lambda, gamma))
    }

    pub fn gompertz(lambda: f64, gamma: f64) -> Self {
        Self::parametric(Parametric::gompertz(lambda, gamma))
    }

    pub fn mixture(family: Family, pmix: f64, lambdas: Vec<f64>, gammas: Vec<f64>) -> Self {
        Self::new(Kernel::Mixture {
            family,
            pmix,
            lambdas,
            gammas,
        })
    }

    /// Parse `source` as a user function on the given scale.
    pub fn user(scale: UserScale, source: &str) -> Result<Self, ExprError> {
        Ok(Self::new(Kernel::User {
            scale,
            expr: expr::parse(source)?,
        }))
    }

    pub fn with_covariates(mut self, effects: Vec<CovariateEffect>) -> Self {
        self.covariates = effects;
        self
    }

    pub fn with_tde(mut self, effects: Vec<CovariateEffect>, time_function: Option<ExprAst>) -> Self {
        self.tde = Some(TdeSpec {
            effects,
            time_function,
        });
        self
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.gl_order = order;
        self
    }

    /// True unless the kernel is a cumulative-scale user function.
    pub fn is_hazard_scale(&self) -> bool {
        !matches!(&self.kernel, Kernel::User { scale, .. } if scale.is_cumulative())
    }

    /// Every invariant breach, in a stable order. Empty means valid.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        match &self.kernel {
            Kernel::Parametric(p) => p.violations(&mut out, ""),
            Kernel::Mixture {
                family,
                pmix,
                lambdas,
                gammas,
            } => {
                if lambdas.len() != 2 {
                    out.push("mixture requires 2 scale values".to_owned());
                }
                match family {
                    Family::Exponential if !gammas.is_empty() => {
                        out.push("exponential mixture takes no gamma values".to_owned());
                    }
                    Family::Weibull | Family::Gompertz if gammas.len() != 2 => {
                        out.push("mixture requires 2 shape values".to_owned());
                    }
                    _ => {}
                }
                if !(0.0..=1.0).contains(pmix) {
                    out.push("pmix must lie in [0, 1]".to_owned());
                }
                if lambdas.len() == 2 {
                    for (i, c) in mixture_components(*family, lambdas, gammas).iter().enumerate() {
                        c.violations(&mut out, &format!("component {}: ", i + 1));
                    }
                }
            }
            Kernel::User { .. } => {}
        }
        for c in &self.covariates {
            effect_violations(c, "covariates", &mut out);
        }
        if let Some(tde) = &self.tde {
            if tde.effects.is_empty() {
                out.push("tde requires at least one effect".to_owned());
            }
            for c in &tde.effects {
                effect_violations(c, "tde", &mut out);
            }
            if let Some(f) = &tde.time_function {
                if !f.covariates().is_empty() {
                    out.push("tde time function may only depend on {t} and {t0}".to_owned());
                }
            }
        }
        if !(quad::MIN_ORDER..=quad::MAX_ORDER).contains(&self.gl_order) {
            out.push(format!(
                "nodes must be between {} and {}",
                quad::MIN_ORDER,
                quad::MAX_ORDER
            ));
        }
        out
    }

    pub fn validate(&self) -> Result<(), Vec<String>> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    /// Validate, resolve covariates against `schema` and compile.
    pub fn bind<S: AsRef<str>>(&self, schema: &[S], clock: Clock) -> Result<BoundHazard, HazardError> {
        self.validate().map_err(HazardError::Invalid)?;
        if clock == Clock::Reset && !self.is_hazard_scale() {
            return Err(HazardError::Invalid(vec![
                "clock-reset requires a hazard-scale kernel".to_owned(),
            ]));
        }
        let compile = |ast: &ExprAst| -> Result<CompiledExpr, ExprError> {
            match clock {
                Clock::Forward => expr::bind(ast, schema),
                Clock::Reset => expr::bind(&expr::substitute_reset(ast), schema),
            }
        };
        let kernel = match &self.kernel {
            Kernel::Parametric(p) => BoundKernel::Parametric(*p),
            Kernel::Mixture {
                family,
                pmix,
                lambdas,
                gammas,
            } => {
                let [c1, c2] = mixture_components(*family, lambdas, gammas);
                BoundKernel::Mixture { pmix: *pmix, c1, c2 }
            }
            Kernel::User { scale, expr } => BoundKernel::User {
                scale: *scale,
                expr: compile(expr)?,
            },
        };
        let lookup = |effects: &[CovariateEffect]| -> Result<Vec<(usize, f64)>, HazardError> {
            effects
                .iter()
                .map(|e| {
                    let idx = schema
                        .iter()
                        .position(|s| s.as_ref() == e.name)
                        .ok_or_else(|| ExprError::UnknownCovariate { name: e.name.clone() })?;
                    Ok((idx, e.coef))
                })
                .collect()
        };
        let beta = lookup(&self.covariates)?;
        let (tau, time_fn) = match &self.tde {
            None => (Vec::new(), TimeFn::None),
            Some(tde) => {
                let f = match (&tde.time_function, &self.kernel) {
                    (Some(ast), _) => TimeFn::Expr(compile(ast)?),
                    (None, Kernel::Parametric(p)) if p.family != Family::Gompertz => TimeFn::Log,
                    (None, Kernel::Parametric(_) | Kernel::Mixture { .. }) => TimeFn::Linear,
                    (None, Kernel::User { .. }) => TimeFn::Expr(compile(&ExprAst::TimeT)?),
                };
                (lookup(&tde.effects)?, f)
            }
        };
        let rule = quad::gl_rule(self.gl_order).map_err(|e| {
            HazardError::Invalid(vec![format!("nodes {} out of range", e.0)])
        })?;
        Ok(BoundHazard {
            kernel,
            beta,
            tau,
            time_fn,
            clock,
            graded: GradedRule::new(&rule),
        })
    }
}

fn effect_violations(c: &CovariateEffect, what: &str, out: &mut Vec<String>) {
    if c.name.is_empty() {
        out.push(format!("{what}: covariate name must be nonempty"));
    }
    if !c.coef.is_finite() {
        out.push(format!("{what}: coefficient of {} must be finite", c.name));
    }
}

fn mixture_components(family: Family, lambdas: &[f64], gammas: &[f64]) -> [Parametric; 2] {
    let comp = |i: usize| Parametric {
        family,
        lambda: lambdas[i],
        gamma: if family == Family::Exponential {
            None
        } else {
            gammas.get(i).copied()
        },
    };
    [comp(0), comp(1)]
}

#[derive(Debug, Clone, PartialEq)]
enum BoundKernel {
    Parametric(Parametric),
    Mixture { pmix: f64, c1: Parametric, c2: Parametric },
    User { scale: UserScale, expr: CompiledExpr },
}

#[derive(Debug, Clone, PartialEq)]
enum TimeFn {
    None,
    /// `log s` on the kernel's own clock.
    Log,
    /// `s` on the kernel's own clock.
    Linear,
    Expr(CompiledExpr),
}

/// Closed-form cumulative hazard `H(s) = a·s^k` or `a·(e^(g·s) - 1)/g`.
#[derive(Debug, Clone, Copy)]
enum Closed {
    Power { a: f64, k: f64 },
    Gompertz { a: f64, g: f64 },
}

impl Closed {
    /// `H(hi) - H(lo)`, written to avoid cancellation between close values.
    fn diff(self, lo: f64, hi: f64) -> f64 {
        match self {
            Closed::Power { a, k } if lo > 0.0 => {
                a * math::powf(lo, k) * math::expm1(k * math::ln1p((hi - lo) / lo))
            }
            Closed::Power { a, k } => a * math::powf(hi, k),
            Closed::Gompertz { a, g } => a * math::exp(g * lo) * gompertz_integral(g, hi - lo),
        }
    }

    /// The `hi` solving `diff(lo, hi) = h`; infinite past a plateau.
    fn inverse_from(self, lo: f64, h: f64) -> f64 {
        match self {
            Closed::Power { a, k } if lo > 0.0 => {
                lo * math::exp(math::ln1p(h / (a * math::powf(lo, k))) / k)
            }
            Closed::Power { a, k } => math::powf(h / a, 1.0 / k),
            Closed::Gompertz { a, g } => lo + gompertz_integral_inverse(g, h / (a * math::exp(g * lo))),
        }
    }
}

/// A validated model bound to a covariate schema and a clock.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundHazard {
    kernel: BoundKernel,
    beta: Vec<(usize, f64)>,
    tau: Vec<(usize, f64)>,
    time_fn: TimeFn,
    clock: Clock,
    graded: GradedRule,
}

impl BoundHazard {
    pub fn clock(&self) -> Clock {
        self.clock
    }

    pub fn is_hazard_scale(&self) -> bool {
        !matches!(&self.kernel, BoundKernel::User { scale, .. } if scale.is_cumulative())
    }

    /// True when the cumulative hazard has a closed form (possibly still
    /// inverted numerically, as for mixtures).
    pub fn has_closed_cumhaz(&self) -> bool {
        match (&self.kernel, &self.time_fn) {
            (BoundKernel::Parametric(_), TimeFn::None | TimeFn::Log | TimeFn::Linear) => true,
            (BoundKernel::Mixture { .. }, TimeFn::None) => true,
            (BoundKernel::User { scale, .. }, _) => scale.is_cumulative(),
            _ => false,
        }
    }

    /// Whether any part of the model reads `{t0}`, explicitly or through a
    /// clock-reset substitution.
    pub fn uses_entry_time(&self) -> bool {
        if self.clock == Clock::Reset {
            return true;
        }
        let k = matches!(&self.kernel, BoundKernel::User { expr, .. } if expr.uses_t0());
        let w = matches!(&self.time_fn, TimeFn::Expr(e) if e.uses_t0());
        k || w
    }

    fn linear_predictors(&self, row: &[f64]) -> Result<(f64, f64), HazardError> {
        let dot = |terms: &[(usize, f64)]| -> Result<f64, HazardError> {
            let mut acc = 0.0;
            for &(i, c) in terms {
                let x = row.get(i).ok_or(ExprError::RowTooShort {
                    needed: i,
                    got: row.len(),
                })?;
                acc += c * x;
            }
            Ok(acc)
        };
        Ok((dot(&self.beta)?, dot(&self.tau)?))
    }

    /// Time on the kernel's own clock.
    fn local(&self, t: f64, t0: f64) -> f64 {
        match self.clock {
            Clock::Forward => t,
            Clock::Reset => (t - t0).max(0.0),
        }
    }

    /// `w(t)` at each point; `None` when there is no tde.
    fn time_values(&self, t: &[f64], t0: f64, row: &[f64]) -> Result<Option<Vec<f64>>, HazardError> {
        Ok(match &self.time_fn {
            TimeFn::None => None,
            TimeFn::Log => Some(t.iter().map(|&x| math::ln(self.local(x, t0))).collect()),
            TimeFn::Linear => Some(t.iter().map(|&x| self.local(x, t0)).collect()),
            TimeFn::Expr(e) => Some(e.evaluate(t, t0, row)?),
        })
    }

    /// `h(t)` at each point. `t0` is the entry time bound to `{t0}` and the
    /// origin of a clock-reset kernel.
    pub fn hazard_at(&self, t: &[f64], t0: f64, row: &[f64]) -> Result<Vec<f64>, HazardError> {
        let (xb, xt) = self.linear_predictors(row)?;
        let w = self.time_values(t, t0, row)?;
        let mut out = match &self.kernel {
            BoundKernel::Parametric(p) => t.iter().map(|&x| p.hazard(self.local(x, t0))).collect(),
            BoundKernel::Mixture { pmix, c1, c2 } => t
                .iter()
                .map(|&x| mixture_hazard(*pmix, c1, c2, self.local(x, t0)))
                .collect(),
            BoundKernel::User { scale, expr } => {
                let mut v = expr.evaluate(t, t0, row)?;
                match scale {
                    UserScale::Hazard => {}
                    UserScale::LogHazard => v.iter_mut().for_each(|x| *x = math::exp(*x)),
                    UserScale::CumHazard | UserScale::LogCumHazard => {
                        return Err(HazardError::CumulativeScale)
                    }
                }
                v
            }
        };
        for (i, h) in out.iter_mut().enumerate() {
            let eta = xb + w.as_ref().map_or(0.0, |w| xt * w[i]);
            let value = if eta == 0.0 { *h } else { *h * math::exp(eta) };
            if value.is_nan() || value == f64::INFINITY {
                return Err(HazardError::NonFinite { t: t[i], value });
            }
            if value < 0.0 {
                return Err(HazardError::NegativeHazard { t: t[i], value });
            }
            *h = value;
        }
        Ok(out)
    }

    /// Closed-form cumulative hazard on the local clock, for parametric
    /// kernels with no tde or their canonical tde.
    fn closed(&self, xb: f64, xt: f64) -> Result<Option<Closed>, HazardError> {
        let BoundKernel::Parametric(p) = &self.kernel else {
            return Ok(None);
        };
        let rho = math::exp(xb);
        let a = p.lambda * rho;
        Ok(Some(match (p.family, &self.time_fn) {
            (Family::Exponential | Family::Weibull, TimeFn::None) => Closed::Power { a, k: p.shape() },
            (Family::Exponential | Family::Weibull, TimeFn::Log) => {
                let g = p.shape();
                let k = g + xt;
                if !(k > 0.0) {
                    return Err(HazardError::NonIntegrable { shape: k });
                }
                Closed::Power { a: a * g / k, k }
            }
            (Family::Gompertz, TimeFn::None) => Closed::Gompertz { a, g: p.shape() },
            (Family::Gompertz, TimeFn::Linear) => Closed::Gompertz { a, g: p.shape() + xt },
            _ => return Ok(None),
        }))
    }

    /// `H` on the local clock for kernels with a closed-form cumulative
    /// hazard; `None` for kernels that need quadrature.
    fn closed_cumhaz_at(&self, t: f64, t0: f64, row: &[f64], xb: f64, xt: f64) -> Result<Option<f64>, HazardError> {
        if let Some(c) = self.closed(xb, xt)? {
            return Ok(Some(c.diff(0.0, self.local(t, t0))));
        }
        match (&self.kernel, &self.time_fn) {
            (BoundKernel::Mixture { pmix, c1, c2 }, TimeFn::None) => {
                let s = self.local(t, t0);
                Ok(Some(-math::exp(xb) * mixture_log_survival(*pmix, c1, c2, s)))
            }
            (BoundKernel::User { scale, expr }, _) if scale.is_cumulative() => {
                if self.local(t, t0) == 0.0 {
                    return Ok(Some(0.0));
                }
                let v = expr.eval_at(t, t0, row)?;
                let w = match self.time_values(&[t], t0, row)? {
                    Some(w) => xt * w[0],
                    None => 0.0,
                };
                Ok(Some(match scale {
                    UserScale::CumHazard => v * math::exp(xb + w),
                    _ => math::exp(v + xb + w),
                }))
            }
            _ => Ok(None),
        }
    }

    /// `∫_from^to h(u) du`.
    pub fn cumhaz(&self, from: f64, to: f64, t0: f64, row: &[f64]) -> Result<f64, HazardError> {
        check_interval(from, to)?;
        if from == to {
            return Ok(0.0);
        }
        let (xb, xt) = self.linear_predictors(row)?;
        if let Some(c) = self.closed(xb, xt)? {
            let v = c.diff(self.local(from, t0), self.local(to, t0));
            return finite_or_err(v, to);
        }
        if let (Some(hi), Some(lo)) = (
            self.closed_cumhaz_at(to, t0, row, xb, xt)?,
            self.closed_cumhaz_at(from, t0, row, xb, xt)?,
        ) {
            return finite_or_err(hi - lo, to);
        }
        self.cumhaz_numeric(from, to, t0, row)
    }

    /// Cumulative hazard by graded Gauss-Legendre quadrature of
    /// [`BoundHazard::hazard_at`], ignoring any closed form.
    pub fn cumhaz_numeric(&self, from: f64, to: f64, t0: f64, row: &[f64]) -> Result<f64, HazardError> {
        check_interval(from, to)?;
        let v = self.graded.integrate(|ts| self.hazard_at(ts, t0, row), from, to)?;
        finite_or_err(v, to)
    }

    /// Smallest `t` in `(lower, cap]` with `cumhaz(lower, t) = target`, or
    /// [`RootOutcome::ExceededCap`] when `cumhaz(lower, cap) < target`.
    /// `cap` may be infinite.
    pub fn invert_cumhaz(
        &self,
        target: f64,
        lower: f64,
        cap: f64,
        t0: f64,
        row: &[f64],
    ) -> Result<RootOutcome, HazardError> {
        if !(target >= 0.0) || !target.is_finite() {
            return Err(HazardError::NonFinite { t: lower, value: target });
        }
        if !(lower < cap) || !lower.is_finite() || lower < 0.0 || cap.is_nan() {
            return Err(HazardError::InvalidInterval { from: lower, to: cap });
        }
        let (xb, xt) = self.linear_predictors(row)?;
        if let Some(c) = self.closed(xb, xt)? {
            let origin = self_local_offset(self.clock, t0);
            let s = c.inverse_from(self.local(lower, t0), target);
            let t = (s + origin).max(lower);
            return Ok(if t > cap || !t.is_finite() {
                RootOutcome::ExceededCap
            } else {
                RootOutcome::Root(t)
            });
        }
        let outcome = rootfind::solve_monotone(
            |t| self.cumhaz(lower, t, t0, row),
            target,
            lower,
            cap,
            rootfind::DEFAULT_TOL,
        )?;
        Ok(outcome)
    }
}

fn self_local_offset(clock: Clock, t0: f64) -> f64 {
    match clock {
        Clock::Forward => 0.0,
        Clock::Reset => t0,
    }
}

fn finite_or_err(v: f64, t: f64) -> Result<f64, HazardError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(HazardError::NonFinite { t, value: v })
    }
}

fn check_interval(from: f64, to: f64) -> Result<(), HazardError> {
    if from >= 0.0 && from <= to && to.is_finite() {
        Ok(())
    } else {
        Err(HazardError::InvalidInterval { from, to })
    }
}

/// `log(p·S₁(s) + (1-p)·S₂(s))`, computed without underflow.
fn mixture_log_survival(p: f64, c1: &Parametric, c2: &Parametric, s: f64) -> f64 {
    if p >= 1.0 {
        return -c1.cumhaz(s);
    }
    if p <= 0.0 {
        return -c2.cumhaz(s);
    }
    let a = math::ln(p) - c1.cumhaz(s);
    let b = math::ln1p(-p) - c2.cumhaz(s);
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + math::ln(math::exp(a - m) + math::exp(b - m))
}

/// `(p·f₁ + (1-p)·f₂) / (p·S₁ + (1-p)·S₂)` at `s`.
fn mixture_hazard(p: f64, c1: &Parametric, c2: &Parametric, s: f64) -> f64 {
    if p >= 1.0 {
        return c1.hazard(s);
    }
    if p <= 0.0 {
        return c2.hazard(s);
    }
    let a = math::ln(p) - c1.cumhaz(s);
    let b = math::ln1p(-p) - c2.cumhaz(s);
    let m = a.max(b);
    let (wa, wb) = (math::exp(a - m), math::exp(b - m));
    (wa * c1.hazard(s) + wb * c2.hazard(s)) / (wa + wb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    const NONE: [&str; 0] = [];

    fn bind(m: &HazardModel) -> BoundHazard {
        m.bind(&NONE, Clock::Forward).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn weibull_hazard_value() {
        let h = bind(&HazardModel::weibull(0.1, 1.2));
        let v = h.hazard_at(&[1.0], 0.0, &[]).unwrap();
        assert!((v[0] - 0.12).abs() < 1e-15);
    }

    #[test]
    fn exponential_with_covariate() {
        let m = HazardModel::exponential(0.02).with_covariates(vec![CovariateEffect::new("trt", -0.5)]);
        let h = m.bind(&["trt"], Clock::Forward).unwrap();
        let v = h.hazard_at(&[0.3, 9.0], 0.0, &[1.0]).unwrap();
        let expected = 0.02 * libm::exp(-0.5);
        assert!(rel(v[0], expected) < 1e-15 && rel(v[1], expected) < 1e-15);
        assert!((expected - 0.012131).abs() < 1e-6);
    }

    #[test]
    fn mixture_boundary_collapses_to_first_component() {
        let mix = bind(&HazardModel::mixture(Family::Weibull, 1.0, vec![0.1, 2.0], vec![1.2, 0.5]));
        let w = bind(&HazardModel::weibull(0.1, 1.2));
        for t in [0.1, 1.0, 4.0] {
            assert_eq!(
                mix.hazard_at(&[t], 0.0, &[]).unwrap(),
                w.hazard_at(&[t], 0.0, &[]).unwrap()
            );
            assert_eq!(
                mix.cumhaz(0.0, t, 0.0, &[]).unwrap(),
                w.cumhaz(0.0, t, 0.0, &[]).unwrap()
            );
        }
    }

    #[test]
    fn cumhaz_examples() {
        let e = bind(&HazardModel::exponential(0.1));
        assert!((e.cumhaz(0.0, 2.0, 0.0, &[]).unwrap() - 0.2).abs() < 1e-15);
        let w = bind(&HazardModel::weibull(0.1, 1.2));
        let closed = w.cumhaz(0.0, 5.0, 0.0, &[]).unwrap();
        assert!(rel(closed, 0.1 * libm::pow(5.0, 1.2)) < 1e-15);
        assert!((closed - 0.68986).abs() < 1e-5);
        let u = bind(&HazardModel::user(UserScale::Hazard, "0.1:*1.2:*{t}:^(1.2:-1)").unwrap());
        let numeric = u.cumhaz(0.0, 5.0, 0.0, &[]).unwrap();
        assert!(rel(numeric, closed) < 1e-9, "{numeric} vs {closed}");
    }

    #[test]
    fn invert_examples() {
        let e = bind(&HazardModel::exponential(0.1));
        let r = e.invert_cumhaz(0.2, 0.0, 1e6, 0.0, &[]).unwrap().root().unwrap();
        assert!((r - 2.0).abs() < 1e-12);
        let w = bind(&HazardModel::weibull(0.1, 1.2));
        let r = w
            .invert_cumhaz(core::f64::consts::LN_2, 0.0, f64::INFINITY, 0.0, &[])
            .unwrap()
            .root()
            .unwrap();
        assert!(rel(r, libm::pow(core::f64::consts::LN_2 / 0.1, 1.0 / 1.2)) < 1e-14);
        assert!((r - 5.0198).abs() < 1e-4);
        let g = bind(&HazardModel::gompertz(0.1, 0.2));
        let target = 0.1 * (libm::exp(0.6) - 1.0) / 0.2;
        let r = g.invert_cumhaz(target, 0.0, 100.0, 0.0, &[]).unwrap().root().unwrap();
        assert!((r - 3.0).abs() < 1e-12);
    }

    #[test]
    fn gompertz_zero_shape_is_exponential() {
        let g = bind(&HazardModel::gompertz(0.3, 0.0));
        assert!(rel(g.cumhaz(0.0, 2.0, 0.0, &[]).unwrap(), 0.6) < 1e-15);
        let r = g.invert_cumhaz(0.6, 0.0, 10.0, 0.0, &[]).unwrap().root().unwrap();
        assert!(rel(r, 2.0) < 1e-15);
        let tiny = bind(&HazardModel::gompertz(0.3, 1e-12));
        assert!(rel(tiny.cumhaz(0.0, 2.0, 0.0, &[]).unwrap(), 0.6) < 1e-11);
    }

    #[test]
    fn gompertz_negative_shape_has_cure_fraction() {
        // H(∞) = λ/|γ| = 0.5.
        let g = bind(&HazardModel::gompertz(0.1, -0.2));
        assert_eq!(
            g.invert_cumhaz(0.6, 0.0, f64::INFINITY, 0.0, &[]).unwrap(),
            RootOutcome::ExceededCap
        );
    }

    #[test]
    fn validation_messages() {
        assert!(HazardModel::weibull(0.1, 1.2).validate().is_ok());
        let v = HazardModel::mixture(Family::Weibull, 0.5, vec![0.1], vec![1.0, 1.0]).violations();
        assert!(v.contains(&"mixture requires 2 scale values".to_string()), "{v:?}");
        let v = HazardModel::weibull(-1.0, 1.2).violations();
        assert_eq!(v, vec!["lambda must be positive".to_string()]);
        let v = HazardModel::weibull(0.1, 1.2).with_tde(vec![], None).violations();
        assert_eq!(v, vec!["tde requires at least one effect".to_string()]);
        let v = HazardModel::weibull(0.1, 1.2).with_order(1).violations();
        assert_eq!(v.len(), 1);
        let v = HazardModel::mixture(Family::Gompertz, 1.5, vec![0.1, 0.2], vec![0.1]).violations();
        assert!(v.contains(&"mixture requires 2 shape values".to_string()));
        assert!(v.contains(&"pmix must lie in [0, 1]".to_string()));
    }

    #[test]
    fn bind_reports_missing_covariate() {
        let m = HazardModel::weibull(0.1, 1.2).with_covariates(vec![CovariateEffect::new("sex", 0.5)]);
        let err = m.bind(&["trt"], Clock::Forward).unwrap_err();
        assert_eq!(err.to_string(), "sex not found");
    }

    #[test]
    fn weibull_tde_closed_form_matches_quadrature() {
        let m = HazardModel::weibull(0.1, 1.2)
            .with_covariates(vec![CovariateEffect::new("trt", -0.5)])
            .with_tde(vec![CovariateEffect::new("trt", 0.3)], None);
        let h = m.bind(&["trt"], Clock::Forward).unwrap();
        let a = h.cumhaz(0.5, 7.0, 0.0, &[1.0]).unwrap();
        let b = h.cumhaz_numeric(0.5, 7.0, 0.0, &[1.0]).unwrap();
        assert!(rel(a, b) < 1e-12, "{a} {b}");
    }

    #[test]
    fn weibull_tde_non_integrable() {
        let m = HazardModel::weibull(0.1, 0.5).with_tde(vec![CovariateEffect::new("x", -1.0)], None);
        let h = m.bind(&["x"], Clock::Forward).unwrap();
        assert_eq!(
            h.cumhaz(0.0, 1.0, 0.0, &[1.0]),
            Err(HazardError::NonIntegrable { shape: -0.5 })
        );
        assert!(h.cumhaz(0.0, 1.0, 0.0, &[0.0]).is_ok());
    }

    #[test]
    fn gompertz_linear_tde_shifts_shape() {
        let m = HazardModel::gompertz(0.1, 0.2).with_tde(vec![CovariateEffect::new("x", 0.1)], None);
        let h = m.bind(&["x"], Clock::Forward).unwrap();
        let expected = bind(&HazardModel::gompertz(0.1, 0.3)).cumhaz(0.0, 4.0, 0.0, &[]).unwrap();
        assert!(rel(h.cumhaz(0.0, 4.0, 0.0, &[1.0]).unwrap(), expected) < 1e-15);
    }

    #[test]
    fn explicit_time_function_uses_quadrature() {
        let m = HazardModel::exponential(0.1).with_tde(
            vec![CovariateEffect::new("x", 0.5)],
            Some(expr::parse("{t}").unwrap()),
        );
        let h = m.bind(&["x"], Clock::Forward).unwrap();
        assert!(!h.has_closed_cumhaz());
        // λ∫₀² e^(0.5u) du
        let expected = 0.1 * (libm::exp(1.0) - 1.0) / 0.5;
        assert!(rel(h.cumhaz(0.0, 2.0, 0.0, &[1.0]).unwrap(), expected) < 1e-13);
    }

    #[test]
    fn mixture_closed_form_matches_quadrature() {
        let m = HazardModel::mixture(Family::Weibull, 0.3, vec![0.5, 0.1], vec![1.5, 0.8])
            .with_covariates(vec![CovariateEffect::new("x", 0.4)]);
        let h = m.bind(&["x"], Clock::Forward).unwrap();
        let a = h.cumhaz(0.0, 6.0, 0.0, &[1.0]).unwrap();
        let b = h.cumhaz_numeric(0.0, 6.0, 0.0, &[1.0]).unwrap();
        assert!(rel(a, b) < 1e-10, "{a} {b}");
    }

    #[test]
    fn user_cumulative_scales() {
        let c = bind(&HazardModel::user(UserScale::CumHazard, "0.1:*{t}:^1.2").unwrap());
        let w = bind(&HazardModel::weibull(0.1, 1.2));
        assert!(rel(c.cumhaz(1.0, 5.0, 0.0, &[]).unwrap(), w.cumhaz(1.0, 5.0, 0.0, &[]).unwrap()) < 1e-15);
        assert_eq!(c.hazard_at(&[1.0], 0.0, &[]), Err(HazardError::CumulativeScale));
        let lc = bind(&HazardModel::user(UserScale::LogCumHazard, "log(0.1):+1.2:*log({t})").unwrap());
        assert!(rel(lc.cumhaz(0.0, 5.0, 0.0, &[]).unwrap(), w.cumhaz(0.0, 5.0, 0.0, &[]).unwrap()) < 1e-14);
        let r = lc.invert_cumhaz(0.5, 0.0, 100.0, 0.0, &[]).unwrap().root().unwrap();
        let expected = w.invert_cumhaz(0.5, 0.0, 100.0, 0.0, &[]).unwrap().root().unwrap();
        assert!(rel(r, expected) < 1e-7);
    }

    #[test]
    fn reset_clock_shifts_time() {
        let w = HazardModel::weibull(0.05, 1.5);
        let fresh = bind(&w);
        let reset = w.bind(&NONE, Clock::Reset).unwrap();
        let a = reset.cumhaz(2.0, 4.0, 2.0, &[]).unwrap();
        let b = fresh.cumhaz(0.0, 2.0, 0.0, &[]).unwrap();
        assert!(rel(a, b) < 1e-15);
        let r = reset.invert_cumhaz(b, 2.0, 100.0, 2.0, &[]).unwrap().root().unwrap();
        assert!(rel(r, 4.0) < 1e-14);
        let u = HazardModel::user(UserScale::Hazard, "0.05:*1.5:*{t}:^0.5").unwrap();
        let ur = u.bind(&NONE, Clock::Reset).unwrap();
        assert!(rel(ur.cumhaz(2.0, 4.0, 2.0, &[]).unwrap(), b) < 1e-12);
    }

    #[test]
    fn entry_time_in_expression() {
        let u = bind(&HazardModel::user(UserScale::Hazard, "0.1:*{t}:^1.5:*exp(-0.05:*({t}-{t0}))").unwrap());
        assert!(u.uses_entry_time());
        let v = u.hazard_at(&[2.0], 1.0, &[]).unwrap()[0];
        assert!(rel(v, 0.1 * libm::pow(2.0, 1.5) * libm::exp(-0.05)) < 1e-15);
    }

    #[test]
    fn negative_user_hazard_rejected() {
        let u = bind(&HazardModel::user(UserScale::Hazard, "1-{t}").unwrap());
        assert!(matches!(
            u.cumhaz(0.0, 3.0, 0.0, &[]),
            Err(HazardError::NegativeHazard { .. })
        ));
    }

    #[test]
    fn invert_beyond_cap_and_lower_bound() {
        let e = bind(&HazardModel::exponential(0.1));
        assert_eq!(e.invert_cumhaz(0.2, 0.0, 1.0, 0.0, &[]).unwrap(), RootOutcome::ExceededCap);
        let r = e.invert_cumhaz(0.2, 5.0, 100.0, 0.0, &[]).unwrap().root().unwrap();
        assert!((r - 7.0).abs() < 1e-12);
        assert!(e.invert_cumhaz(0.2, 5.0, 5.0, 0.0, &[]).is_err());
    }
}
