//! Competing-risks and multi-state path simulation.
//!
//! From state `s` entered at time `e`, the next event time solves
//! `Σₖ Hₖ(e → t) = -log u₁` over the transitions `k` leaving `s`, and the
//! destination is drawn with probabilities `hₖ(t) / Σ hₖ(t)` using a second
//! uniform. Each step consumes exactly two uniforms (time, then cause) from
//! the observation's substream. Times are always on the global timescale;
//! clock-reset transitions see `t - e`, and `{t0}` binds to `e`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::hazards::{BoundHazard, Clock, HazardError, HazardModel};
use crate::math;
use crate::quad;
use crate::rng::Substream;
use crate::rootfind::{self, RootError, RootOutcome};
use crate::table::{CovariateTable, ObsValue};

pub const MAX_HAZARDS: usize = 50;
pub const MAX_STEPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub enum MsmError {
    NotSquare { rows: usize, row: usize, len: usize },
    TooFewStates(usize),
    SelfTransition { state: usize },
    NonIncreasing { number: usize },
    Gap { expected: usize, got: usize },
    NoTransitions,
    HazardCount { expected: usize, got: usize },
    TooManyHazards(usize),
    CumulativeScale { transition: usize },
    StartState { row: usize, state: usize, k: usize },
    EmptyTable,
    LengthMismatch { what: &'static str, expected: usize, got: usize },
    Truncation { row: usize, ltrunc: f64, maxtime: f64 },
    Model { transition: usize, source: HazardError },
    /// All hazards out of the current state were zero at the event time.
    DegenerateHazard { t: f64 },
    /// The total-hazard root finder failed.
    Numeric(HazardError),
    TooManySteps,
    /// Failure while simulating 1-based `row` at 1-based `step`.
    Observation { row: usize, step: usize, source: alloc::boxed::Box<MsmError> },
}

impl fmt::Display for MsmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MsmError::NotSquare { rows, row, len } => {
                write!(f, "transition matrix is not square: row {row} has {len} entries, expected {rows}")
            }
            MsmError::TooFewStates(k) => write!(f, "transition matrix needs at least 2 states, got {k}"),
            MsmError::SelfTransition { state } => {
                write!(f, "diagonal entry for state {state} must be empty")
            }
            MsmError::NonIncreasing { number } => write!(
                f,
                "transition numbers must increase in reading order (found {number} out of order)"
            ),
            MsmError::Gap { expected, got } => write!(
                f,
                "transition numbers must run 1, 2, ... without gaps (expected {expected}, found {got})"
            ),
            MsmError::NoTransitions => f.write_str("transition matrix has no transitions"),
            MsmError::HazardCount { expected, got } => {
                write!(f, "{got} hazards given for {expected} transitions")
            }
            MsmError::TooManyHazards(m) => {
                write!(f, "at most {MAX_HAZARDS} transition hazards are supported, got {m}")
            }
            MsmError::CumulativeScale { transition } => write!(
                f,
                "hazard {transition}: multi-state transitions need a hazard-scale function"
            ),
            MsmError::StartState { row, state, k } => {
                write!(f, "observation {row}: start state {state} is not in 1..{k}")
            }
            MsmError::EmptyTable => f.write_str("no observations to simulate"),
            MsmError::LengthMismatch { what, expected, got } => {
                write!(f, "{what} has {got} values, expected {expected}")
            }
            MsmError::Truncation { row, ltrunc, maxtime } => write!(
                f,
                "observation {row}: ltruncated ({ltrunc}) must be >= 0 and below maxtime ({maxtime})"
            ),
            MsmError::Model { transition, source } => write!(f, "hazard {transition}: {source}"),
            MsmError::DegenerateHazard { t } => {
                write!(f, "all transition hazards are zero at the event time {t}")
            }
            MsmError::Numeric(e) => e.fmt(f),
            MsmError::TooManySteps => write!(f, "path exceeded {MAX_STEPS} transitions"),
            MsmError::Observation { row, step, source } => {
                write!(f, "observation {row}, step {step}: {source}")
            }
        }
    }
}

impl core::error::Error for MsmError {}

/// A validated `K × K` transition matrix. States are numbered `1..=K` and
/// transitions `1..=M` in reading order.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    k: usize,
    entries: Vec<Option<usize>>,
    /// `(from, to)` per transition, 1-based states.
    transitions: Vec<(usize, usize)>,
    /// 0-based transition indices leaving each state.
    outgoing: Vec<Vec<usize>>,
    state_names: Option<Vec<String>>,
}

/// Validate a matrix given row by row, `None` marking impossible transitions.
pub fn validate_transmatrix(entries: &[Vec<Option<usize>>]) -> Result<TransitionMatrix, MsmError> {
    let k = entries.len();
    if k < 2 {
        return Err(MsmError::TooFewStates(k));
    }
    let mut flat = Vec::with_capacity(k * k);
    let mut transitions = Vec::new();
    let mut outgoing = vec![Vec::new(); k];
    for (r, row) in entries.iter().enumerate() {
        if row.len() != k {
            return Err(MsmError::NotSquare {
                rows: k,
                row: r + 1,
                len: row.len(),
            });
        }
        if row[r].is_some() {
            return Err(MsmError::SelfTransition { state: r + 1 });
        }
    }
    let numbers: Vec<usize> = entries.iter().flatten().filter_map(|&e| e).collect();
    if let Some(w) = numbers.windows(2).find(|w| w[1] <= w[0]) {
        return Err(MsmError::NonIncreasing { number: w[1] });
    }
    if let Some((i, &n)) = numbers.iter().enumerate().find(|&(i, &n)| n != i + 1) {
        return Err(MsmError::Gap { expected: i + 1, got: n });
    }
    for (r, row) in entries.iter().enumerate() {
        for (c, &entry) in row.iter().enumerate() {
            flat.push(entry);
            if entry.is_some() {
                outgoing[r].push(transitions.len());
                transitions.push((r + 1, c + 1));
            }
        }
    }
    if transitions.is_empty() {
        return Err(MsmError::NoTransitions);
    }
    Ok(TransitionMatrix {
        k,
        entries: flat,
        transitions,
        outgoing,
        state_names: None,
    })
}

/// Competing risks: state 1 with transitions `j: 1 → j+1`, all others
/// absorbing.
pub fn default_cr_matrix(m: usize) -> Result<TransitionMatrix, MsmError> {
    if m == 0 {
        return Err(MsmError::NoTransitions);
    }
    if m > MAX_HAZARDS {
        return Err(MsmError::TooManyHazards(m));
    }
    let k = m + 1;
    let mut rows = vec![vec![None; k]; k];
    for (j, cell) in rows[0].iter_mut().enumerate().skip(1) {
        *cell = Some(j);
    }
    validate_transmatrix(&rows)
}

impl TransitionMatrix {
    pub fn k_states(&self) -> usize {
        self.k
    }

    pub fn n_transitions(&self) -> usize {
        self.transitions.len()
    }

    /// `(from, to)` of 1-based transition `number`.
    pub fn transition(&self, number: usize) -> Option<(usize, usize)> {
        self.transitions.get(number.checked_sub(1)?).copied()
    }

    pub fn transitions(&self) -> &[(usize, usize)] {
        &self.transitions
    }

    /// Transition number at 1-based `(from, to)`.
    pub fn entry(&self, from: usize, to: usize) -> Option<usize> {
        if from == 0 || to == 0 || from > self.k || to > self.k {
            return None;
        }
        self.entries[(from - 1) * self.k + to - 1]
    }

    /// 0-based indices of the transitions leaving 1-based `state`.
    pub fn outgoing(&self, state: usize) -> &[usize] {
        &self.outgoing[state - 1]
    }

    pub fn is_absorbing(&self, state: usize) -> bool {
        self.outgoing[state - 1].is_empty()
    }

    pub fn rows(&self) -> Vec<Vec<Option<usize>>> {
        self.entries.chunks(self.k).map(|r| r.to_vec()).collect()
    }

    pub fn state_names(&self) -> Option<&[String]> {
        self.state_names.as_deref()
    }

    pub fn with_state_names(mut self, names: Vec<String>) -> Self {
        if names.len() == self.k {
            self.state_names = Some(names);
        }
        self
    }

    /// True if some state can be revisited.
    pub fn is_cyclic(&self) -> bool {
        self.topological_order().is_none()
    }

    /// States (1-based) ordered so every transition goes forward; `None`
    /// for cyclic graphs.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indegree = vec![0usize; self.k];
        for &(_, to) in &self.transitions {
            indegree[to - 1] += 1;
        }
        let mut ready: Vec<usize> = (1..=self.k).filter(|&s| indegree[s - 1] == 0).collect();
        ready.reverse();
        let mut order = Vec::with_capacity(self.k);
        while let Some(s) = ready.pop() {
            order.push(s);
            for &j in &self.outgoing[s - 1] {
                let to = self.transitions[j].1;
                indegree[to - 1] -= 1;
                if indegree[to - 1] == 0 {
                    ready.push(to);
                }
            }
        }
        (order.len() == self.k).then_some(order)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionHazard {
    pub model: HazardModel,
    pub reset: bool,
}

impl TransitionHazard {
    pub fn new(model: HazardModel) -> Self {
        Self { model, reset: false }
    }

    pub fn reset(model: HazardModel) -> Self {
        Self { model, reset: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MsmSpec {
    pub matrix: TransitionMatrix,
    /// Indexed by transition number minus one.
    pub hazards: Vec<TransitionHazard>,
    pub maxtime: ObsValue<f64>,
    pub startstate: ObsValue<usize>,
    pub ltruncated: ObsValue<f64>,
    pub gl_order: usize,
}

impl MsmSpec {
    /// Spec with `startstate 1`, `ltruncated 0` and the default order.
    pub fn new(matrix: TransitionMatrix, hazards: Vec<TransitionHazard>, maxtime: ObsValue<f64>) -> Self {
        Self {
            matrix,
            hazards,
            maxtime,
            startstate: ObsValue::Scalar(1),
            ltruncated: ObsValue::Scalar(0.0),
            gl_order: quad::DEFAULT_ORDER,
        }
    }

    /// Competing risks over the given cause-specific hazards.
    pub fn competing_risks(hazards: Vec<HazardModel>, maxtime: ObsValue<f64>) -> Result<Self, MsmError> {
        let matrix = default_cr_matrix(hazards.len())?;
        Ok(Self::new(
            matrix,
            hazards.into_iter().map(TransitionHazard::new).collect(),
            maxtime,
        ))
    }

    /// Check the structural invariants that do not need data.
    pub fn check(&self) -> Result<(), MsmError> {
        let m = self.hazards.len();
        if m > MAX_HAZARDS {
            return Err(MsmError::TooManyHazards(m));
        }
        if m != self.matrix.n_transitions() {
            return Err(MsmError::HazardCount {
                expected: self.matrix.n_transitions(),
                got: m,
            });
        }
        for (j, h) in self.hazards.iter().enumerate() {
            if !h.model.is_hazard_scale() {
                return Err(MsmError::CumulativeScale { transition: j + 1 });
            }
        }
        Ok(())
    }

    /// Bind every transition hazard against `schema`.
    pub fn bind<S: AsRef<str>>(&self, schema: &[S]) -> Result<BoundMsm, MsmError> {
        self.check()?;
        let hazards = self
            .hazards
            .iter()
            .enumerate()
            .map(|(j, h)| {
                let clock = if h.reset { Clock::Reset } else { Clock::Forward };
                let mut model = h.model.clone();
                model.gl_order = self.gl_order;
                model.bind(schema, clock).map_err(|source| MsmError::Model {
                    transition: j + 1,
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BoundMsm {
            matrix: self.matrix.clone(),
            hazards,
        })
    }
}

/// Transition hazards bound to a covariate schema.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundMsm {
    matrix: TransitionMatrix,
    hazards: Vec<BoundHazard>,
}

impl BoundMsm {
    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }

    /// 0-based transition index.
    pub fn hazard(&self, j: usize) -> &BoundHazard {
        &self.hazards[j]
    }

    /// True when no transition depends on the time of state entry, so the
    /// process is Markov in the current state.
    pub fn is_markov(&self) -> bool {
        self.hazards.iter().all(|h| !h.uses_entry_time())
    }

    /// `Σₖ ∫_from^to hₖ(u) du` over the transitions leaving `state`, entered
    /// at `entry`.
    pub fn total_cumhaz(&self, state: usize, entry: f64, from: f64, to: f64, row: &[f64]) -> Result<f64, MsmError> {
        let mut total = 0.0;
        for &j in self.matrix.outgoing(state) {
            total += self.hazards[j]
                .cumhaz(from, to, entry, row)
                .map_err(|source| MsmError::Model {
                    transition: j + 1,
                    source,
                })?;
        }
        Ok(total)
    }

    /// Hazard of every transition leaving `state` at time `t`.
    pub fn hazards_at(&self, state: usize, entry: f64, t: f64, row: &[f64]) -> Result<Vec<f64>, MsmError> {
        self.matrix
            .outgoing(state)
            .iter()
            .map(|&j| {
                self.hazards[j]
                    .hazard_at(&[t], entry, row)
                    .map(|v| v[0])
                    .map_err(|source| MsmError::Model {
                        transition: j + 1,
                        source,
                    })
            })
            .collect()
    }

    fn next_time(&self, state: usize, entry: f64, target: f64, cap: f64, row: &[f64]) -> Result<RootOutcome, MsmError> {
        let out = self.matrix.outgoing(state);
        if let [j] = out {
            return self.hazards[*j]
                .invert_cumhaz(target, entry, cap, entry, row)
                .map_err(|source| MsmError::Model {
                    transition: j + 1,
                    source,
                });
        }
        rootfind::solve_monotone(
            |t| self.total_cumhaz(state, entry, entry, t, row),
            target,
            entry,
            cap,
            rootfind::DEFAULT_TOL,
        )
        .map_err(|e| match e {
            RootError::Eval(e) => e,
            RootError::NonFinite { t, value } => MsmError::Numeric(HazardError::NonFinite { t, value }),
            RootError::NoConvergence { lower, upper } => {
                MsmError::Numeric(HazardError::NoConvergence { lower, upper })
            }
            RootError::InvalidBracket { lower, cap } => {
                MsmError::Numeric(HazardError::InvalidInterval { from: lower, to: cap })
            }
        })
    }

    /// Simulate one observation's path from `startstate` entered at `ltrunc`.
    pub fn simulate_path(
        &self,
        row: &[f64],
        rng: &mut Substream,
        maxtime: f64,
        ltrunc: f64,
        startstate: usize,
    ) -> Result<PathRecord, MsmError> {
        let mut path = PathRecord {
            time0: ltrunc,
            state0: startstate,
            steps: Vec::new(),
        };
        let (mut state, mut entry) = (startstate, ltrunc);
        while !self.matrix.is_absorbing(state) && entry < maxtime {
            if path.steps.len() == MAX_STEPS {
                return Err(MsmError::TooManySteps);
            }
            let u_time = rng.next_uniform();
            let u_cause = rng.next_uniform();
            let wrap = |e: MsmError, step: usize| MsmError::Observation {
                row: 0,
                step,
                source: alloc::boxed::Box::new(e),
            };
            let step = path.steps.len() + 1;
            match self
                .next_time(state, entry, -math::ln(u_time), maxtime, row)
                .map_err(|e| wrap(e, step))?
            {
                RootOutcome::ExceededCap => {
                    path.steps.push(Step {
                        time: maxtime,
                        state,
                        event: false,
                    });
                    break;
                }
                RootOutcome::Root(t) => {
                    let values = self.hazards_at(state, entry, t, row).map_err(|e| wrap(e, step))?;
                    let k = next_state_draw(&values, u_cause).map_err(|_| wrap(MsmError::DegenerateHazard { t }, step))?;
                    let next = self.matrix.transitions[self.matrix.outgoing(state)[k]].1;
                    path.steps.push(Step {
                        time: t,
                        state: next,
                        event: true,
                    });
                    state = next;
                    entry = t;
                }
            }
        }
        Ok(path)
    }
}

/// 0-based index drawn with probabilities proportional to `values`.
pub fn next_state_draw(values: &[f64], u: f64) -> Result<usize, MsmError> {
    let total: f64 = values.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(MsmError::DegenerateHazard { t: f64::NAN });
    }
    let threshold = u * total;
    let mut acc = 0.0;
    for (i, &v) in values.iter().enumerate() {
        acc += v;
        if threshold < acc {
            return Ok(i);
        }
    }
    // Rounding pushed u·total past the running sum: take the last positive.
    Ok(values.iter().rposition(|&v| v > 0.0).unwrap_or(0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub time: f64,
    pub state: usize,
    pub event: bool,
}

/// One observation's history: entry `(time0, state0)` and the transitions
/// or final censoring that follow, on the global timescale.
#[derive(Debug, Clone, PartialEq)]
pub struct PathRecord {
    pub time0: f64,
    pub state0: usize,
    pub steps: Vec<Step>,
}

impl PathRecord {
    /// State occupied at time `at`, or `None` before entry.
    pub fn state_at(&self, at: f64) -> Option<usize> {
        if at < self.time0 {
            return None;
        }
        let mut s = self.state0;
        for step in &self.steps {
            if step.time <= at && step.event {
                s = step.state;
            } else if step.time > at {
                break;
            }
        }
        Some(s)
    }

    /// Check path legality, strict time ordering and censoring placement.
    pub fn check(&self, matrix: &TransitionMatrix, maxtime: f64) -> Result<(), String> {
        let mut prev_state = self.state0;
        let mut prev_time = self.time0;
        for (j, step) in self.steps.iter().enumerate() {
            let n = j + 1;
            if !(step.time > prev_time) {
                return Err(format!("time{n} = {} is not after {prev_time}", step.time));
            }
            if step.time > maxtime {
                return Err(format!("time{n} = {} exceeds maxtime {maxtime}", step.time));
            }
            if step.event {
                if matrix.entry(prev_state, step.state).is_none() {
                    return Err(format!("step {n}: {prev_state} -> {} is not a transition", step.state));
                }
            } else {
                if n != self.steps.len() {
                    return Err(format!("censoring at step {n} is not the final step"));
                }
                if step.time != maxtime || step.state != prev_state {
                    return Err(format!("censoring at step {n} must stay in state {prev_state} at maxtime"));
                }
            }
            prev_state = step.state;
            prev_time = step.time;
        }
        let last = self.steps.last();
        let ended = matrix.is_absorbing(prev_state)
            || last.is_some_and(|s| !s.event || s.time == maxtime)
            || self.time0 >= maxtime;
        if !ended {
            return Err(format!("path stops in transient state {prev_state} before maxtime"));
        }
        Ok(())
    }
}

/// A validated multi-state run; rows can be simulated in any order.
#[derive(Debug, Clone)]
pub struct MsmJob {
    bound: BoundMsm,
    seed: u64,
    maxtime: ObsValue<f64>,
    ltrunc: ObsValue<f64>,
    startstate: ObsValue<usize>,
    n: usize,
}

impl MsmJob {
    pub fn new(spec: &MsmSpec, table: &CovariateTable, seed: u64) -> Result<Self, MsmError> {
        let n = table.n_rows();
        if n == 0 {
            return Err(MsmError::EmptyTable);
        }
        let len = |what: &'static str, r: Result<(), usize>| {
            r.map_err(|got| MsmError::LengthMismatch { what, expected: n, got })
        };
        len("maxtime", spec.maxtime.check_len(n))?;
        len("ltruncated", spec.ltruncated.check_len(n))?;
        len("startstate", spec.startstate.check_len(n))?;
        let k = spec.matrix.k_states();
        for i in 0..n {
            let (l, m) = (spec.ltruncated.get(i), spec.maxtime.get(i));
            if !(l >= 0.0 && l < m) || !l.is_finite() || !m.is_finite() {
                return Err(MsmError::Truncation {
                    row: i + 1,
                    ltrunc: l,
                    maxtime: m,
                });
            }
            let s = spec.startstate.get(i);
            if s == 0 || s > k {
                return Err(MsmError::StartState { row: i + 1, state: s, k });
            }
        }
        Ok(Self {
            bound: spec.bind(table.names())?,
            seed,
            maxtime: spec.maxtime.clone(),
            ltrunc: spec.ltruncated.clone(),
            startstate: spec.startstate.clone(),
            n,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n
    }

    pub fn bound(&self) -> &BoundMsm {
        &self.bound
    }

    pub fn maxtime(&self, i: usize) -> f64 {
        self.maxtime.get(i)
    }

    /// Simulate 0-based row `i`.
    pub fn run_row(&self, table: &CovariateTable, i: usize) -> Result<PathRecord, MsmError> {
        let mut rng = Substream::new(self.seed, i as u64);
        self.bound
            .simulate_path(
                table.row(i),
                &mut rng,
                self.maxtime.get(i),
                self.ltrunc.get(i),
                self.startstate.get(i),
            )
            .map_err(|e| match e {
                MsmError::Observation { step, source, .. } => MsmError::Observation { row: i + 1, step, source },
                other => MsmError::Observation {
                    row: i + 1,
                    step: 0,
                    source: alloc::boxed::Box::new(other),
                },
            })
    }
}

/// Paths of a multi-state run, in input row order.
#[derive(Debug, Clone, PartialEq)]
pub struct MsmDataset {
    pub paths: Vec<PathRecord>,
}

impl MsmDataset {
    /// Step-column groups: the longest path's step count, at least 1.
    pub fn n_steps(&self) -> usize {
        self.paths.iter().map(|p| p.steps.len()).max().unwrap_or(0).max(1)
    }

    /// Names `time0, state0, time1, state1, event1, …`.
    pub fn column_names(&self) -> Vec<String> {
        let mut names = vec![String::from("time0"), String::from("state0")];
        for j in 1..=self.n_steps() {
            names.push(format!("time{j}"));
            names.push(format!("state{j}"));
            names.push(format!("event{j}"));
        }
        names
    }

    /// Wide rows matching [`MsmDataset::column_names`]; `None` is missing.
    pub fn wide_rows(&self) -> Vec<Vec<Option<f64>>> {
        let m = self.n_steps();
        self.paths
            .iter()
            .map(|p| {
                let mut row = Vec::with_capacity(2 + 3 * m);
                row.push(Some(p.time0));
                row.push(Some(p.state0 as f64));
                for j in 0..m {
                    match p.steps.get(j) {
                        Some(s) => {
                            row.push(Some(s.time));
                            row.push(Some(s.state as f64));
                            row.push(Some(if s.event { 1.0 } else { 0.0 }));
                        }
                        None => row.extend([None, None, None]),
                    }
                }
                row
            })
            .collect()
    }

    /// `variables time0 to timeM created` and friends.
    pub fn stub_notices(&self) -> [String; 3] {
        let m = self.n_steps();
        [
            format!("variables time0 to time{m} created"),
            format!("variables state0 to state{m} created"),
            format!("variables event1 to event{m} created"),
        ]
    }

    /// Observations censored at `maxtime` before absorption.
    pub fn censored(&self) -> usize {
        self.paths
            .iter()
            .filter(|p| p.steps.last().is_some_and(|s| !s.event))
            .count()
    }
}

/// Rebuild a path from one wide row (`time0, state0, time1, state1, event1, …`).
pub fn path_from_wide(row: &[Option<f64>]) -> Result<PathRecord, String> {
    if row.len() < 2 || (row.len() - 2) % 3 != 0 {
        return Err(format!("wide row has {} fields; expected 2 + 3m", row.len()));
    }
    let state = |v: f64| -> Result<usize, String> {
        if v >= 1.0 && libm::trunc(v) == v {
            Ok(v as usize)
        } else {
            Err(format!("invalid state {v}"))
        }
    };
    let (Some(time0), Some(state0)) = (row[0], row[1]) else {
        return Err(String::from("time0 and state0 must be present"));
    };
    let mut steps = Vec::new();
    let mut ended = false;
    for group in row[2..].chunks(3) {
        match (group[0], group[1], group[2]) {
            (Some(time), Some(s), Some(e)) if !ended => steps.push(Step {
                time,
                state: state(s)?,
                event: e != 0.0,
            }),
            (None, None, None) => ended = true,
            _ => return Err(String::from("step columns must be all present or all missing, with no gaps")),
        }
    }
    Ok(PathRecord {
        time0,
        state0: state(state0)?,
        steps,
    })
}

/// Simulate every row of `table` sequentially.
pub fn simulate_msm_dataset(spec: &MsmSpec, table: &CovariateTable, seed: u64) -> Result<MsmDataset, MsmError> {
    let job = MsmJob::new(spec, table, seed)?;
    let paths = (0..job.n_rows())
        .map(|i| job.run_row(table, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MsmDataset { paths })
}
