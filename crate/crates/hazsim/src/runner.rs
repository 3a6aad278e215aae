//! Parallel execution of validated jobs.
//!
//! Rows are independent and each draws from its own counter-based stream, so
//! the output is identical for every thread count. Results are collected in
//! row order; on failure the error of the lowest failing row is reported.

use hazsim_core::engine::{EngineError, SingleEventJob, SingleEventOutput};
use hazsim_core::msm::{MsmDataset, MsmError, MsmJob};
use hazsim_core::table::CovariateTable;
use rayon::prelude::*;

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        None => f(),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(f),
            // could not spawn workers; run on the caller's thread instead
            Err(_) => f(),
        },
    }
}

fn ordered<T, E>(results: Vec<Result<T, E>>) -> Result<Vec<T>, E> {
    results.into_iter().collect()
}

/// Simulate every row of a single-event job. `threads = None` uses rayon's
/// global pool.
pub fn run_single(
    job: &SingleEventJob,
    table: &CovariateTable,
    threads: Option<usize>,
) -> Result<SingleEventOutput, EngineError> {
    let draws = in_pool(threads, || {
        (0..job.n_rows())
            .into_par_iter()
            .map(|i| job.run_row(table, i))
            .collect::<Vec<_>>()
    });
    ordered(draws).map(SingleEventOutput::from_draws)
}

/// Simulate every path of a multi-state job.
pub fn run_msm(job: &MsmJob, table: &CovariateTable, threads: Option<usize>) -> Result<MsmDataset, MsmError> {
    let paths = in_pool(threads, || {
        (0..job.n_rows())
            .into_par_iter()
            .map(|i| job.run_row(table, i))
            .collect::<Vec<_>>()
    });
    ordered(paths).map(|paths| MsmDataset { paths })
}

/// Output columns of a single-event run: covariates, then `time, event, rc`.
pub fn single_columns(table: &CovariateTable, out: &SingleEventOutput) -> (Vec<String>, Vec<Vec<Option<f64>>>) {
    let mut names = table.names().to_vec();
    names.extend(["time", "event", "rc"].map(String::from));
    let rows = (0..out.len())
        .map(|i| {
            let mut row: Vec<Option<f64>> = table.row(i).iter().map(|v| Some(*v)).collect();
            row.push(Some(out.time[i]));
            row.push(Some(if out.event[i] { 1.0 } else { 0.0 }));
            row.push(Some(f64::from(out.rc[i].code())));
            row
        })
        .collect();
    (names, rows)
}

/// Output columns of a multi-state run: covariates, then
/// `time0, state0, time1, state1, event1, …`.
pub fn msm_columns(table: &CovariateTable, ds: &MsmDataset) -> (Vec<String>, Vec<Vec<Option<f64>>>) {
    let mut names = table.names().to_vec();
    names.extend(ds.column_names());
    let rows = ds
        .wide_rows()
        .into_iter()
        .enumerate()
        .map(|(i, wide)| {
            let mut row: Vec<Option<f64>> = table.row(i).iter().map(|v| Some(*v)).collect();
            row.extend(wide);
            row
        })
        .collect();
    (names, rows)
}

/// The censoring warning, or `None` when nothing was capped.
pub fn censoring_warning(count: usize) -> Option<String> {
    (count > 0).then(|| {
        format!(
            "Warning: {count} survival times were above the upper limit of maxtime()\n         They have been set to maxtime()\n         You can identify them by rc = 3"
        )
    })
}
