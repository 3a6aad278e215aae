//! Validation utilities: Kaplan-Meier, Kolmogorov-Smirnov distances,
//! empirical state occupation and a brute-force occupation oracle.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::hazards::{BoundHazard, HazardError};
use crate::math;
use crate::msm::{BoundMsm, MsmError, PathRecord};

/// Cells used by [`oracle_occupation`] for Markov specs.
pub const MARKOV_CELLS: usize = 100_000;
/// Cells used by [`oracle_occupation`] when transitions depend on entry time.
pub const SEMI_MARKOV_CELLS: usize = 400;

#[derive(Debug, Clone, PartialEq)]
pub enum StatsError {
    LengthMismatch { times: usize, events: usize },
    Empty,
    /// The oracle only handles acyclic state graphs.
    Cyclic,
    InvalidState { state: usize, k: usize },
    InvalidTime(f64),
    Msm(MsmError),
}

impl fmt::Display for StatsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatsError::LengthMismatch { times, events } => {
                write!(f, "{times} times but {events} event flags")
            }
            StatsError::Empty => f.write_str("no observations"),
            StatsError::Cyclic => f.write_str("occupation oracle requires an acyclic transition matrix"),
            StatsError::InvalidState { state, k } => write!(f, "state {state} is not in 1..{k}"),
            StatsError::InvalidTime(t) => write!(f, "invalid query time {t}"),
            StatsError::Msm(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for StatsError {}

impl From<MsmError> for StatsError {
    fn from(e: MsmError) -> Self {
        StatsError::Msm(e)
    }
}

/// Product-limit estimate as `(event time, S(t))` steps. Censorings tied
/// with events are still at risk at that time.
pub fn kaplan_meier(times: &[f64], events: &[bool]) -> Result<Vec<(f64, f64)>, StatsError> {
    if times.len() != events.len() {
        return Err(StatsError::LengthMismatch {
            times: times.len(),
            events: events.len(),
        });
    }
    let mut idx: Vec<usize> = (0..times.len()).collect();
    idx.sort_by(|&a, &b| times[a].total_cmp(&times[b]));
    let mut at_risk = times.len();
    let mut s = 1.0;
    let mut out = Vec::new();
    let mut i = 0;
    while i < idx.len() {
        let t = times[idx[i]];
        let mut j = i;
        let mut deaths = 0usize;
        while j < idx.len() && times[idx[j]] == t {
            deaths += usize::from(events[idx[j]]);
            j += 1;
        }
        if deaths > 0 {
            s *= 1.0 - deaths as f64 / at_risk as f64;
            out.push((t, s));
        }
        at_risk -= j - i;
        i = j;
    }
    Ok(out)
}

/// Value of a Kaplan-Meier step function at `t` (right-continuous).
pub fn km_at(curve: &[(f64, f64)], t: f64) -> f64 {
    let k = curve.partition_point(|&(x, _)| x <= t);
    if k == 0 {
        1.0
    } else {
        curve[k - 1].1
    }
}

/// One-sample Kolmogorov-Smirnov distance between `sample` and `cdf`.
pub fn ks_distance(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let hi = (i + 1) as f64 / n - f;
            let lo = f - i as f64 / n;
            hi.abs().max(lo.abs())
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov-Smirnov distance `sup |F_a - F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] == x {
            i += 1;
        }
        while j < xb.len() && xb[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic two-sample critical value at level `alpha`:
/// `sqrt(-ln(alpha/2)/2) · sqrt((n+m)/(n·m))`.
pub fn ks_critical(alpha: f64, n: usize, m: usize) -> f64 {
    let c = math::sqrt(-math::ln(alpha / 2.0) / 2.0);
    let (n, m) = (n as f64, m as f64);
    c * math::sqrt((n + m) / (n * m))
}

/// Fraction of observations in each state at `at`, over observations
/// entered by then. Index `s - 1` holds state `s`.
pub fn occupation_fractions(paths: &[PathRecord], k: usize, at: f64) -> Result<Vec<f64>, StatsError> {
    let mut counts = vec![0usize; k];
    let mut n = 0usize;
    for p in paths {
        if let Some(s) = p.state_at(at) {
            if s == 0 || s > k {
                return Err(StatsError::InvalidState { state: s, k });
            }
            counts[s - 1] += 1;
            n += 1;
        }
    }
    if n == 0 {
        return Err(StatsError::Empty);
    }
    Ok(counts.into_iter().map(|c| c as f64 / n as f64).collect())
}

/// Exact occupation probabilities at `at` for one covariate row, starting in
/// `start` at time `entry`, by fine-grid integration. Markov specs use a
/// product integral of cell-wise matrix exponentials over
/// [`MARKOV_CELLS`] cells; specs with clock-reset or `{t0}` transitions
/// propagate entry-time mass over [`SEMI_MARKOV_CELLS`] cells. Cyclic graphs
/// are rejected.
pub fn oracle_occupation(
    spec: &BoundMsm,
    row: &[f64],
    start: usize,
    entry: f64,
    at: f64,
) -> Result<Vec<f64>, StatsError> {
    let cells = if spec.is_markov() {
        MARKOV_CELLS
    } else {
        SEMI_MARKOV_CELLS
    };
    oracle_occupation_with(spec, row, start, entry, at, cells)
}

/// [`oracle_occupation`] with an explicit cell count.
pub fn oracle_occupation_with(
    spec: &BoundMsm,
    row: &[f64],
    start: usize,
    entry: f64,
    at: f64,
    cells: usize,
) -> Result<Vec<f64>, StatsError> {
    let matrix = spec.matrix();
    let k = matrix.k_states();
    if start == 0 || start > k {
        return Err(StatsError::InvalidState { state: start, k });
    }
    let order = matrix.topological_order().ok_or(StatsError::Cyclic)?;
    if !(at >= entry) || !at.is_finite() || !entry.is_finite() {
        return Err(StatsError::InvalidTime(at));
    }
    let mut p = vec![0.0; k];
    p[start - 1] = 1.0;
    if at == entry {
        return Ok(p);
    }
    let cells = cells.max(1);
    let grid: Vec<f64> = (0..=cells)
        .map(|i| {
            if i == cells {
                at
            } else {
                entry + (at - entry) * i as f64 / cells as f64
            }
        })
        .collect();
    if spec.is_markov() {
        product_integral(spec, row, &grid, p)
    } else {
        mass_propagation(spec, row, &grid, &order, start)
    }
}

/// Cumulative hazard over one oracle cell: the closed form when there is
/// one, else 3-point Gauss-Legendre on the hazard (exact to degree 5, ample
/// for cells this narrow).
fn cell_cumhaz(h: &BoundHazard, a: f64, b: f64, t0: f64, row: &[f64]) -> Result<f64, HazardError> {
    if h.has_closed_cumhaz() {
        return h.cumhaz(a, b, t0, row);
    }
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let x = math::sqrt(0.6) * half;
    let v = h.hazard_at(&[mid - x, mid, mid + x], t0, row)?;
    Ok(half * (5.0 * v[0] + 8.0 * v[1] + 5.0 * v[2]) / 9.0)
}

fn product_integral(spec: &BoundMsm, row: &[f64], grid: &[f64], mut p: Vec<f64>) -> Result<Vec<f64>, StatsError> {
    let matrix = spec.matrix();
    let k = matrix.k_states();
    let trans = matrix.transitions();
    let mut inc = vec![0.0; trans.len()];
    let mut out_rate = vec![0.0; k];
    for w in grid.windows(2) {
        let (a, b) = (w[0], w[1]);
        out_rate.iter_mut().for_each(|x| *x = 0.0);
        for (j, &(from, _)) in trans.iter().enumerate() {
            let h = cell_cumhaz(spec.hazard(j), a, b, a, row).map_err(|source| MsmError::Model { transition: j + 1, source })?;
            inc[j] = h;
            out_rate[from - 1] += h;
        }
        // exp(Q) = exp(Q/m)^m keeps each Taylor series short.
        let norm = out_rate.iter().fold(0.0f64, |m, &x| m.max(x));
        let m = ((norm / 0.5) as usize).max(1);
        let scale = 1.0 / m as f64;
        for _ in 0..m {
            let mut term = p.clone();
            let mut sum = p.clone();
            for n in 1..40 {
                let mut next = vec![0.0; k];
                for (j, &(from, to)) in trans.iter().enumerate() {
                    let flow = term[from - 1] * inc[j] * scale;
                    next[to - 1] += flow;
                    next[from - 1] -= flow;
                }
                let inv = 1.0 / n as f64;
                let mut biggest = 0.0f64;
                for (t, x) in term.iter_mut().zip(&next) {
                    *t = x * inv;
                    biggest = biggest.max(t.abs());
                }
                for (s, t) in sum.iter_mut().zip(&term) {
                    *s += t;
                }
                if biggest < 1e-18 {
                    break;
                }
            }
            p = sum;
        }
    }
    Ok(p)
}

fn mass_propagation(
    spec: &BoundMsm,
    row: &[f64],
    grid: &[f64],
    order: &[usize],
    start: usize,
) -> Result<Vec<f64>, StatsError> {
    let matrix = spec.matrix();
    let k = matrix.k_states();
    let cells = grid.len() - 1;
    // Per state and cell: (mass, mass·entry time).
    let mut bins = vec![vec![(0.0f64, 0.0f64); cells]; k];
    let mut occupancy = vec![0.0; k];
    let model_err = |j: usize| move |source| MsmError::Model { transition: j + 1, source };

    for &s in order {
        let mut atoms: Vec<(f64, f64, usize)> = Vec::new();
        if s == start {
            atoms.push((grid[0], 1.0, 0));
        }
        for (c, &(m, mt)) in bins[s - 1].iter().enumerate() {
            if m > 0.0 {
                atoms.push((mt / m, m, c));
            }
        }
        let out = matrix.outgoing(s);
        if out.is_empty() {
            occupancy[s - 1] += atoms.iter().map(|a| a.1).sum::<f64>();
            continue;
        }
        for (e, w, first_cell) in atoms {
            let mut surv = 1.0;
            for c in first_cell..cells {
                let a = grid[c].max(e);
                let b = grid[c + 1];
                if b <= a {
                    continue;
                }
                let mut incs = [0.0f64; crate::msm::MAX_HAZARDS];
                let mut total = 0.0;
                for (slot, &j) in out.iter().enumerate() {
                    let h = cell_cumhaz(spec.hazard(j), a, b, e, row).map_err(model_err(j))?;
                    incs[slot] = h;
                    total += h;
                }
                let next = surv * math::exp(-total);
                let leaving = w * (surv - next);
                if total > 0.0 && leaving > 0.0 {
                    let mid = 0.5 * (a + b);
                    for (slot, &j) in out.iter().enumerate() {
                        let to = matrix.transitions()[j].1;
                        let m = leaving * incs[slot] / total;
                        let bin = &mut bins[to - 1][c];
                        bin.0 += m;
                        bin.1 += m * mid;
                    }
                }
                surv = next;
            }
            occupancy[s - 1] += w * surv;
        }
    }
    Ok(occupancy)
}
