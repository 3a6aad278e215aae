//! Bracketed root finding for monotone cumulative-hazard equations.
//!
//! [`solve_monotone`] solves `g(t) = target` on `[lower, cap]` for a
//! nondecreasing `g`. It uses Brent's method (inverse quadratic
//! interpolation and secant steps, falling back to bisection whenever an
//! interpolated step would not shrink the bracket fast enough).

use core::fmt;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const MAX_ITERATIONS: usize = 200;
/// The residual `|g(t) - target|` must also fall below this fraction of
/// `tol·|target|`, so tiny targets (short steps past `lower`) are resolved
/// in value as well as in time.
const VALUE_TOL_FACTOR: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootOutcome {
    Root(f64),
    /// `g(cap)` is below the target: the solution lies beyond the cap.
    ExceededCap,
}

impl RootOutcome {
    pub fn root(self) -> Option<f64> {
        match self {
            RootOutcome::Root(t) => Some(t),
            RootOutcome::ExceededCap => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RootError<E> {
    /// The function itself failed.
    Eval(E),
    NonFinite { t: f64, value: f64 },
    NoConvergence { lower: f64, upper: f64 },
    InvalidBracket { lower: f64, cap: f64 },
}

impl<E: fmt::Display> fmt::Display for RootError<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootError::Eval(e) => e.fmt(f),
            RootError::NonFinite { t, value } => {
                write!(f, "non-finite function value {value} at t = {t}")
            }
            RootError::NoConvergence { lower, upper } => write!(
                f,
                "root finder did not converge within {MAX_ITERATIONS} iterations (bracket [{lower}, {upper}])"
            ),
            RootError::InvalidBracket { lower, cap } => {
                write!(f, "invalid bracket: lower {lower} must be below cap {cap}")
            }
        }
    }
}

impl<E: fmt::Debug + fmt::Display> core::error::Error for RootError<E> {}

/// Slack on the value scale used for the cap test: a target within this
/// distance above `g(cap)` still counts as reached at the cap.
pub fn cap_slack(target: f64, tol: f64) -> f64 {
    tol * target.abs().max(1.0)
}

/// Solve `g(t) = target` for nondecreasing `g` on `[lower, cap]`.
///
/// `g(cap)` is evaluated first; if it falls short of the target by more than
/// [`cap_slack`] the result is [`RootOutcome::ExceededCap`] and no
/// iteration happens. Otherwise the returned root lies in a final bracket of
/// width at most `tol * max(1, t)` and leaves a residual of at most
/// `0.01 * tol * |target|` unless floating point resolution is reached
/// first. An infinite `cap` is handled by doubling
/// the bracket until it straddles the target.
pub fn solve_monotone<G, E>(
    mut g: G,
    target: f64,
    lower: f64,
    cap: f64,
    tol: f64,
) -> Result<RootOutcome, RootError<E>>
where
    G: FnMut(f64) -> Result<f64, E>,
{
    if !(lower < cap) || !lower.is_finite() || cap.is_nan() || !(tol > 0.0) {
        return Err(RootError::InvalidBracket { lower, cap });
    }
    let mut eval = |t: f64| -> Result<f64, RootError<E>> {
        let v = g(t).map_err(RootError::Eval)?;
        if v.is_finite() {
            Ok(v - target)
        } else {
            Err(RootError::NonFinite { t, value: v })
        }
    };

    let (mut a, mut fa, b, fb);
    if cap.is_finite() {
        let f_cap = eval(cap)?;
        if f_cap < -cap_slack(target, tol) {
            return Ok(RootOutcome::ExceededCap);
        }
        if f_cap <= 0.0 {
            return Ok(RootOutcome::Root(cap));
        }
        a = lower;
        fa = eval(lower)?;
        b = cap;
        fb = f_cap;
    } else {
        a = lower;
        fa = eval(lower)?;
        let mut width = lower.abs().max(1.0);
        loop {
            let hi = lower + width;
            if !hi.is_finite() {
                return Ok(RootOutcome::ExceededCap);
            }
            let f_hi = eval(hi)?;
            if f_hi >= 0.0 {
                b = hi;
                fb = f_hi;
                break;
            }
            a = hi;
            fa = f_hi;
            width *= 2.0;
        }
    }
    if fa >= 0.0 {
        return Ok(RootOutcome::Root(a));
    }
    let value_tol = VALUE_TOL_FACTOR * tol * target.abs();
    brent(&mut eval, a, fa, b, fb, tol, value_tol).map(RootOutcome::Root)
}

// Brent's method on a bracket with fa < 0 <= fb. Stops once the bracket is
// within `tol·max(1, |b|)` and the residual within `value_tol`, or once the
// bracket cannot shrink further in floating point.
fn brent<F, E>(
    f: &mut F,
    a0: f64,
    fa0: f64,
    b0: f64,
    fb0: f64,
    tol: f64,
    value_tol: f64,
) -> Result<f64, RootError<E>>
where
    F: FnMut(f64) -> Result<f64, RootError<E>>,
{
    let (mut a, mut fa) = (a0, fa0);
    let (mut b, mut fb) = (b0, fb0);
    let (mut c, mut fc) = (b, fb);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..MAX_ITERATIONS {
        if (fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = (0.5 * tol * b.abs().max(1.0)).max(2.0 * f64::EPSILON * b.abs());
        let xm = 0.5 * (c - b);
        let at_resolution = xm.abs() <= 4.0 * f64::EPSILON * b.abs().max(f64::MIN_POSITIVE);
        if (xm.abs() <= tol1 && fb.abs() <= value_tol) || at_resolution || fb == 0.0 {
            return Ok(b);
        }
        // Bracket resolved but residual still large: keep bisecting finely.
        let tol1 = if xm.abs() <= tol1 {
            2.0 * f64::EPSILON * b.abs()
        } else {
            tol1
        };
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Err(RootError::NoConvergence {
        lower: b.min(c),
        upper: b.max(c),
    })
}
