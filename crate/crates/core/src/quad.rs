//! Gauss-Legendre quadrature.
//!
//! Rules are computed by Newton iteration on the Legendre polynomial
//! recurrence. [`integrate`] applies a single rule over `[a, b]`;
//! [`GradedRule`] lays copies of a rule over geometrically shrinking panels
//! towards the lower limit, which keeps integrands with an integrable
//! power-type singularity at the lower limit (`t^0.2` hazards from time 0,
//! clock-reset hazards from state entry) accurate to near machine precision.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::math;

pub const DEFAULT_ORDER: usize = 30;
pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 512;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GlRule {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderOutOfRange(pub usize);

impl fmt::Display for OrderOutOfRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "quadrature order {} outside [{MIN_ORDER}, {MAX_ORDER}]",
            self.0
        )
    }
}

impl core::error::Error for OrderOutOfRange {}

impl GlRule {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Abscissae in increasing order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Build the `order`-point Gauss-Legendre rule.
pub fn gl_rule(order: usize) -> Result<GlRule, OrderOutOfRange> {
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return Err(OrderOutOfRange(order));
    }
    let n = order;
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let nf = n as f64;

    // Roots are symmetric; solve for the positive half and mirror.
    for i in 0..n.div_ceil(2) {
        let mut x = math::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 2.0 * f64::EPSILON {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }

    Ok(GlRule {
        order,
        nodes,
        weights,
    })
}

// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `(b - a)/2 * sum w_i f(x_i)` with the rule's nodes mapped onto `[a, b]`.
///
/// `f` receives the whole node vector in one call. A degenerate interval
/// returns exactly zero without calling `f`.
pub fn integrate<F, E>(f: F, a: f64, b: f64, rule: &GlRule) -> Result<f64, E>
where
    F: FnOnce(&[f64]) -> Result<Vec<f64>, E>,
{
    if a == b {
        return Ok(0.0);
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let xs: Vec<f64> = rule.nodes.iter().map(|&x| mid + half * x).collect();
    let ys = f(&xs)?;
    let sum: f64 = rule.weights.iter().zip(&ys).map(|(w, y)| w * y).sum();
    Ok(half * sum)
}

/// Ratio between consecutive panel widths in a [`GradedRule`].
pub const GRADING_RATIO: f64 = 0.125;
/// Number of panels in a [`GradedRule`]; the innermost has relative width
/// `GRADING_RATIO^(GRADED_PANELS - 1)`.
pub const GRADED_PANELS: usize = 12;

/// A composite rule on `[0, 1]` built from one Gauss-Legendre rule laid over
/// geometrically graded panels `[r^(k+1), r^k]` plus `[0, r^(P-1)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedRule {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GradedRule {
    pub fn new(rule: &GlRule) -> Self {
        Self::with_panels(rule, GRADED_PANELS, GRADING_RATIO)
    }

    pub fn with_panels(rule: &GlRule, panels: usize, ratio: f64) -> Self {
        assert!(panels >= 1 && ratio > 0.0 && ratio < 1.0);
        let mut edges = Vec::with_capacity(panels + 1);
        edges.push(0.0);
        for k in (0..panels).rev() {
            edges.push(math::powf(ratio, k as f64));
        }
        let mut nodes = Vec::with_capacity(panels * rule.order);
        let mut weights = Vec::with_capacity(panels * rule.order);
        for pair in edges.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
        }
        Self {
            order: rule.order,
            nodes,
            weights,
        }
    }

    /// Order of the underlying Gauss-Legendre rule.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes of the composite rule mapped onto `[a, b]`.
    pub fn nodes_on(&self, a: f64, b: f64) -> Vec<f64> {
        let width = b - a;
        self.nodes.iter().map(|&s| a + width * s).collect()
    }

    /// Integrate over `[a, b]`; the grading clusters towards `a`. `f` is
    /// called once with the full node vector.
    pub fn integrate<F, E>(&self, f: F, a: f64, b: f64) -> Result<f64, E>
    where
        F: FnOnce(&[f64]) -> Result<Vec<f64>, E>,
    {
        if a == b {
            return Ok(0.0);
        }
        let ys = f(&self.nodes_on(a, b))?;
        let sum: f64 = self.weights.iter().zip(&ys).map(|(w, y)| w * y).sum();
        Ok((b - a) * sum)
    }
}

#[cfg(feature = "std")]
mod cache {
    use super::{gl_rule, GlRule, OrderOutOfRange};
    use std::collections::BTreeMap;
    use std::sync::{Arc, Mutex, OnceLock};

    static RULES: OnceLock<Mutex<BTreeMap<usize, Arc<GlRule>>>> = OnceLock::new();

    /// Process-wide cached rule for `order`.
    pub fn cached_rule(order: usize) -> Result<Arc<GlRule>, OrderOutOfRange> {
        let map = RULES.get_or_init(|| Mutex::new(BTreeMap::new()));
        if let Some(rule) = map.lock().unwrap_or_else(|e| e.into_inner()).get(&order) {
            return Ok(Arc::clone(rule));
        }
        let rule = Arc::new(gl_rule(order)?);
        let mut guard = map.lock().unwrap_or_else(|e| e.into_inner());
        Ok(Arc::clone(guard.entry(order).or_insert(rule)))
    }
}

#[cfg(feature = "std")]
pub use cache::cached_rule;
