//! Goodness-of-fit reports for simulated datasets against their generating
//! configuration.
//!
//! Single-event data is checked by transforming each time to its conditional
//! cumulative hazard `V = H(entry → time)`, which is unit exponential under
//! the model, and comparing the censored Kaplan-Meier curve of `V` with
//! `exp(-v)`. Multi-state data is checked by comparing occupation fractions
//! with the integration oracle.

use std::fmt::Write as _;

use hazsim_core::hazards::{Clock, HazardModel};
use hazsim_core::msm::{path_from_wide, BoundMsm, MsmSpec, PathRecord};
use hazsim_core::stats::{self, StatsError};
use hazsim_core::table::{CovariateTable, ObsValue};

use crate::dataio::NumericTable;

/// Columns added by the simulator; everything else is a covariate.
pub fn is_generated_column(name: &str) -> bool {
    if matches!(name, "time" | "event" | "rc") {
        return true;
    }
    ["time", "state", "event"].iter().any(|stub| {
        name.strip_prefix(stub)
            .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
    })
}

/// Split a simulated dataset into its covariate table and generated columns.
pub fn split_dataset(data: &NumericTable) -> Result<(CovariateTable, Vec<usize>), String> {
    let cov_idx: Vec<usize> = (0..data.names.len())
        .filter(|&c| !is_generated_column(&data.names[c]))
        .collect();
    let gen_idx: Vec<usize> = (0..data.names.len())
        .filter(|&c| is_generated_column(&data.names[c]))
        .collect();
    let names = cov_idx.iter().map(|&c| data.names[c].clone()).collect();
    let mut rows = Vec::with_capacity(data.rows.len());
    for (r, row) in data.rows.iter().enumerate() {
        let values = cov_idx
            .iter()
            .map(|&c| row[c].ok_or_else(|| format!("missing value at row {}, column {}", r + 1, c + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(values);
    }
    let table = CovariateTable::new(names, rows).map_err(|e| e.to_string())?;
    Ok((table, gen_idx))
}

/// Asymptotic one-sample Kolmogorov-Smirnov critical value.
pub fn ks_critical_one_sample(alpha: f64, n: usize) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleReport {
    pub n: usize,
    pub events: usize,
    /// `sup |KM_V(v) - exp(-v)|` over the observed range of `V`.
    pub distance: f64,
    /// 1% critical value for an uncensored sample of the same size; with
    /// censoring the test is conservative only approximately.
    pub critical: f64,
}

impl SingleReport {
    pub fn passes(&self) -> bool {
        self.distance <= self.critical
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "observations        {:>10}", self.n);
        let _ = writeln!(s, "events              {:>10}", self.events);
        let _ = writeln!(s, "censored            {:>10}", self.n - self.events);
        let _ = writeln!(s, "KS distance         {:>10.6}", self.distance);
        let _ = writeln!(s, "1% critical value   {:>10.6}", self.critical);
        let _ = writeln!(s, "result              {:>10}", if self.passes() { "pass" } else { "FAIL" });
        s
    }
}

/// Check single-event output columns against `model`.
pub fn validate_single(
    model: &HazardModel,
    table: &CovariateTable,
    times: &[f64],
    events: &[bool],
    ltrunc: &ObsValue<f64>,
) -> Result<SingleReport, String> {
    let n = times.len();
    if n == 0 {
        return Err("no observations".into());
    }
    let h = model.bind(table.names(), Clock::Forward).map_err(|e| e.to_string())?;
    let mut v = Vec::with_capacity(n);
    for (i, &t) in times.iter().enumerate() {
        let l = ltrunc.get(i);
        // also rejects NaN
        if t.partial_cmp(&l) != Some(core::cmp::Ordering::Greater) {
            return Err(format!("row {}: time {t} is not after the entry time {l}", i + 1));
        }
        let x = h.cumhaz(l, t, l, table.row(i)).map_err(|e| format!("row {}: {e}", i + 1))?;
        // V must be positive for the estimator; an exact zero only arises
        // from a vanishing hazard and carries no information
        v.push(x.max(f64::MIN_POSITIVE));
    }
    let curve = stats::kaplan_meier(&v, events).map_err(|e| e.to_string())?;
    let mut distance: f64 = 0.0;
    let mut before = 1.0;
    for &(x, s) in &curve {
        let target = (-x).exp();
        distance = distance.max((before - target).abs()).max((s - target).abs());
        before = s;
    }
    Ok(SingleReport {
        n,
        events: events.iter().filter(|e| **e).count(),
        distance,
        critical: ks_critical_one_sample(0.01, n),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OccupationRow {
    pub at: f64,
    pub simulated: Vec<f64>,
    /// `None` when the oracle does not apply (cyclic state graph).
    pub oracle: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MsmReport {
    pub n: usize,
    pub k: usize,
    pub rows: Vec<OccupationRow>,
}

impl MsmReport {
    /// Largest absolute gap between simulated and oracle fractions.
    pub fn max_gap(&self) -> Option<f64> {
        let mut gap: Option<f64> = None;
        for r in &self.rows {
            if let Some(o) = &r.oracle {
                for (a, b) in r.simulated.iter().zip(o) {
                    gap = Some(gap.unwrap_or(0.0).max((a - b).abs()));
                }
            }
        }
        gap
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "observations {}", self.n);
        let _ = writeln!(s, "{:>10}  {:>6}  {:>10}  {:>10}  {:>10}", "time", "state", "simulated", "oracle", "diff");
        for r in &self.rows {
            for j in 0..self.k {
                let sim = r.simulated[j];
                match &r.oracle {
                    Some(o) => {
                        let _ = writeln!(
                            s,
                            "{:>10.4}  {:>6}  {:>10.4}  {:>10.4}  {:>+10.4}",
                            r.at,
                            j + 1,
                            sim,
                            o[j],
                            sim - o[j]
                        );
                    }
                    None => {
                        let _ = writeln!(s, "{:>10.4}  {:>6}  {:>10.4}  {:>10}  {:>10}", r.at, j + 1, sim, "-", "-");
                    }
                }
            }
        }
        match self.max_gap() {
            Some(g) => {
                let _ = writeln!(s, "max |simulated - oracle| = {g:.4}");
            }
            None => {
                let _ = writeln!(s, "oracle unavailable: the transition graph has cycles");
            }
        }
        s
    }
}

/// Parse wide step columns (`time0, state0, time1, ...`) into paths.
pub fn paths_from_data(data: &NumericTable, gen_idx: &[usize]) -> Result<Vec<PathRecord>, String> {
    data.rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let wide: Vec<Option<f64>> = gen_idx.iter().map(|&c| row[c]).collect();
            path_from_wide(&wide).map_err(|e| format!("row {}: {e}", r + 1))
        })
        .collect()
}

/// Oracle cells when many distinct covariate patterns must be integrated.
const COARSE_MARKOV_CELLS: usize = 2_000;
const COARSE_SEMI_MARKOV_CELLS: usize = 100;
const FINE_GROUPS: usize = 20;

/// Compare occupation fractions at each of `times` with the oracle,
/// averaged over the observations' covariates, start states and entry times.
pub fn validate_msm(
    spec: &MsmSpec,
    table: &CovariateTable,
    paths: &[PathRecord],
    times: &[f64],
) -> Result<MsmReport, String> {
    let bound = spec.bind(table.names()).map_err(|e| e.to_string())?;
    let k = bound.matrix().k_states();
    let groups = group_rows(table, paths);
    let cyclic = bound.matrix().is_cyclic();
    let mut rows = Vec::with_capacity(times.len());
    for &at in times {
        let simulated = stats::occupation_fractions(paths, k, at).map_err(|e| e.to_string())?;
        let oracle = if cyclic {
            None
        } else {
            Some(oracle_mixture(&bound, table, &groups, at).map_err(|e| e.to_string())?)
        };
        rows.push(OccupationRow { at, simulated, oracle });
    }
    Ok(MsmReport {
        n: paths.len(),
        k,
        rows,
    })
}

struct Group {
    row: usize,
    start: usize,
    entry: f64,
    count: usize,
}

fn group_rows(table: &CovariateTable, paths: &[PathRecord]) -> Vec<Group> {
    let mut idx: Vec<usize> = (0..paths.len()).collect();
    let key = |i: usize| {
        let mut k: Vec<u64> = table.row(i).iter().map(|v| v.to_bits()).collect();
        k.push(paths[i].state0 as u64);
        k.push(paths[i].time0.to_bits());
        k
    };
    idx.sort_by_key(|&i| key(i));
    let mut groups: Vec<Group> = Vec::new();
    let mut last: Option<Vec<u64>> = None;
    for i in idx {
        let k = key(i);
        if last.as_ref() == Some(&k) {
            groups.last_mut().expect("group exists").count += 1;
        } else {
            groups.push(Group {
                row: i,
                start: paths[i].state0,
                entry: paths[i].time0,
                count: 1,
            });
            last = Some(k);
        }
    }
    groups
}

fn oracle_mixture(bound: &BoundMsm, table: &CovariateTable, groups: &[Group], at: f64) -> Result<Vec<f64>, StatsError> {
    let k = bound.matrix().k_states();
    let cells = match (groups.len() <= FINE_GROUPS, bound.is_markov()) {
        (true, true) => stats::MARKOV_CELLS,
        (true, false) => stats::SEMI_MARKOV_CELLS,
        (false, true) => COARSE_MARKOV_CELLS,
        (false, false) => COARSE_SEMI_MARKOV_CELLS,
    };
    let mut total = vec![0.0; k];
    let mut weight = 0usize;
    for g in groups.iter().filter(|g| g.entry <= at) {
        let p = stats::oracle_occupation_with(bound, table.row(g.row), g.start, g.entry, at, cells)?;
        for (t, v) in total.iter_mut().zip(p) {
            *t += v * g.count as f64;
        }
        weight += g.count;
    }
    if weight == 0 {
        return Err(StatsError::Empty);
    }
    Ok(total.into_iter().map(|t| t / weight as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_columns() {
        assert!(is_generated_column("time"));
        assert!(is_generated_column("state12"));
        assert!(is_generated_column("event1"));
        assert!(!is_generated_column("trt"));
        assert!(!is_generated_column("timer"));
        assert!(!is_generated_column("state"));
    }

    #[test]
    fn exact_exponential_sample_passes() {
        // quantile sample of Exp(0.5): V = 0.5·t is unit exponential
        let n = 2000;
        let times: Vec<f64> = (0..n).map(|i| -((1.0 - (i as f64 + 0.5) / n as f64).ln()) / 0.5).collect();
        let events = vec![true; n];
        let table = CovariateTable::empty(n);
        let r = validate_single(&HazardModel::exponential(0.5), &table, &times, &events, &ObsValue::Scalar(0.0)).unwrap();
        assert!(r.distance < 1e-3, "{r:?}");
        assert!(r.passes());
        let wrong = validate_single(&HazardModel::exponential(1.0), &table, &times, &events, &ObsValue::Scalar(0.0)).unwrap();
        assert!(!wrong.passes());
    }
}
