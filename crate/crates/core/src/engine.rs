//! Single-event sampling with delayed entry and right censoring.
//!
//! Observation `i` draws one uniform, index 0 of substream `(seed, i)`, and
//! solves `H(t) - H(ltrunc) = -log u`. A solution beyond `maxtime` becomes a
//! censored row `(maxtime, 0, rc = 3)`.

use alloc::vec::Vec;
use core::fmt;

use crate::hazards::{BoundHazard, Clock, HazardError, HazardModel};
use crate::math;
use crate::rng;
use crate::rootfind::RootOutcome;
use crate::table::{CovariateTable, ObsValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReturnCode {
    Event = 1,
    /// The event fell beyond `maxtime`; the time was set to `maxtime`.
    Capped = 3,
}

impl ReturnCode {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleDrawResult {
    pub time: f64,
    pub event: bool,
    pub rc: ReturnCode,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EngineError {
    EmptyTable,
    LengthMismatch { what: &'static str, expected: usize, got: usize },
    /// `ltrunc < maxtime` or `ltrunc ≥ 0` broken at 1-based `row`.
    Truncation { row: usize, ltrunc: f64, maxtime: f64 },
    InvalidUniform(f64),
    Model(HazardError),
    /// Failure while simulating 1-based `row`.
    Observation { row: usize, source: HazardError },
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::EmptyTable => f.write_str("no observations to simulate"),
            EngineError::LengthMismatch { what, expected, got } => {
                write!(f, "{what} has {got} values, expected {expected}")
            }
            EngineError::Truncation { row, ltrunc, maxtime } => write!(
                f,
                "observation {row}: ltruncated ({ltrunc}) must be >= 0 and below maxtime ({maxtime})"
            ),
            EngineError::InvalidUniform(u) => write!(f, "uniform draw {u} is not in (0, 1)"),
            EngineError::Model(e) => e.fmt(f),
            EngineError::Observation { row, source } => write!(f, "observation {row}: {source}"),
        }
    }
}

impl core::error::Error for EngineError {}

/// Draw one time from `h` for covariate row `row`. `{t0}` binds to `ltrunc`.
pub fn simulate_single(
    h: &BoundHazard,
    row: &[f64],
    u: f64,
    maxtime: f64,
    ltrunc: f64,
) -> Result<SingleDrawResult, EngineError> {
    if !(u > 0.0 && u < 1.0) {
        return Err(EngineError::InvalidUniform(u));
    }
    if !(ltrunc >= 0.0 && ltrunc < maxtime) || !ltrunc.is_finite() {
        return Err(EngineError::Truncation { row: 0, ltrunc, maxtime });
    }
    let target = -math::ln(u);
    let outcome = h
        .invert_cumhaz(target, ltrunc, maxtime, ltrunc, row)
        .map_err(EngineError::Model)?;
    Ok(match outcome {
        RootOutcome::Root(time) => SingleDrawResult {
            time,
            event: true,
            rc: ReturnCode::Event,
        },
        RootOutcome::ExceededCap => SingleDrawResult {
            time: maxtime,
            event: false,
            rc: ReturnCode::Capped,
        },
    })
}

/// A validated single-event run; rows can be simulated in any order.
#[derive(Debug, Clone)]
pub struct SingleEventJob {
    hazard: BoundHazard,
    seed: u64,
    maxtime: ObsValue<f64>,
    ltrunc: ObsValue<f64>,
    n: usize,
}

impl SingleEventJob {
    pub fn new(
        model: &HazardModel,
        table: &CovariateTable,
        seed: u64,
        maxtime: ObsValue<f64>,
        ltrunc: ObsValue<f64>,
    ) -> Result<Self, EngineError> {
        let n = table.n_rows();
        if n == 0 {
            return Err(EngineError::EmptyTable);
        }
        check_len("maxtime", &maxtime, n)?;
        check_len("ltruncated", &ltrunc, n)?;
        for i in 0..n {
            let (l, m) = (ltrunc.get(i), maxtime.get(i));
            if !(l >= 0.0 && l < m) || !l.is_finite() {
                return Err(EngineError::Truncation {
                    row: i + 1,
                    ltrunc: l,
                    maxtime: m,
                });
            }
        }
        let hazard = model.bind(table.names(), Clock::Forward).map_err(EngineError::Model)?;
        Ok(Self {
            hazard,
            seed,
            maxtime,
            ltrunc,
            n,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n
    }

    pub fn hazard(&self) -> &BoundHazard {
        &self.hazard
    }

    /// Simulate 0-based row `i`.
    pub fn run_row(&self, table: &CovariateTable, i: usize) -> Result<SingleDrawResult, EngineError> {
        let u = rng::uniform_at(self.seed, i as u64, 0);
        simulate_single(&self.hazard, table.row(i), u, self.maxtime.get(i), self.ltrunc.get(i)).map_err(
            |e| match e {
                EngineError::Model(source) => EngineError::Observation { row: i + 1, source },
                other => other,
            },
        )
    }
}

fn check_len(what: &'static str, v: &ObsValue<f64>, n: usize) -> Result<(), EngineError> {
    v.check_len(n).map_err(|got| EngineError::LengthMismatch {
        what,
        expected: n,
        got,
    })
}

/// Columns of a single-event run, in input row order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SingleEventOutput {
    pub time: Vec<f64>,
    pub event: Vec<bool>,
    pub rc: Vec<ReturnCode>,
}

impl SingleEventOutput {
    pub fn from_draws(draws: impl IntoIterator<Item = SingleDrawResult>) -> Self {
        let mut out = Self::default();
        for d in draws {
            out.time.push(d.time);
            out.event.push(d.event);
            out.rc.push(d.rc);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.time.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time.is_empty()
    }

    /// Rows with `rc = 3`.
    pub fn censored(&self) -> usize {
        self.rc.iter().filter(|&&r| r == ReturnCode::Capped).count()
    }
}

/// Simulate every row of `table` sequentially.
pub fn simulate_dataset(
    model: &HazardModel,
    table: &CovariateTable,
    seed: u64,
    maxtime: ObsValue<f64>,
    ltrunc: ObsValue<f64>,
) -> Result<SingleEventOutput, EngineError> {
    let job = SingleEventJob::new(model, table, seed, maxtime, ltrunc)?;
    let draws = (0..job.n_rows())
        .map(|i| job.run_row(table, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SingleEventOutput::from_draws(draws))
}
