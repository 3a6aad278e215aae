//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints its pass/fail line; exits non-zero if any fails.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use hazsim::runner::{msm_columns, run_msm, run_single};
use hazsim_core::engine::{simulate_single, SingleEventJob};
use hazsim_core::hazards::{Clock, CovariateEffect, HazardModel, UserScale};
use hazsim_core::msm::{path_from_wide, validate_transmatrix, MsmJob, MsmSpec, TransitionHazard, TransitionMatrix};
use hazsim_core::rng::{uniform_at, Substream};
use hazsim_core::stats::{ks_critical, ks_two_sample, occupation_fractions, oracle_occupation};
use hazsim_core::table::{CovariateTable, ObsValue};

type Outcome = Result<String, String>;

const LOG_CUBIC: &str = "-1:+0.02:*{t}:-0.03:*{t}:^2:+0.005:*{t}:^3";

fn log_cubic_hazard(t: f64) -> f64 {
    (-1.0 + 0.02 * t - 0.03 * t * t + 0.005 * t * t * t).exp()
}

fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut sum = 0.5 * (f(a) + f(b));
    for i in 1..n {
        sum += f(a + h * i as f64);
    }
    sum * h
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        sum += f(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn matrix(rows: &[&[Option<usize>]]) -> TransitionMatrix {
    validate_transmatrix(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

/// Covariates come from their own seed: sharing the simulation seed would
/// reuse each row's time uniform and correlate trt with the outcome.
fn bernoulli_trt(n: usize, seed: u64) -> CovariateTable {
    let rows = (0..n as u64).map(|i| vec![f64::from(uniform_at(seed, i, 0) > 0.5)]).collect();
    CovariateTable::new(vec!["trt".into()], rows).unwrap()
}

/// Criterion 1: Closed-form Weibull times equal user-expression times from the same
/// uniforms.
fn c1_parametric_user_equivalence() -> Outcome {
    let start = Instant::now();
    let closed = HazardModel::weibull(0.1, 1.2).bind::<&str>(&[], Clock::Forward).unwrap();
    let user = HazardModel::user(UserScale::Hazard, "0.1:*1.2:*{t}:^(1.2:-1)")
        .unwrap()
        .bind::<&str>(&[], Clock::Forward)
        .unwrap();
    if user.has_closed_cumhaz() {
        return Err("user kernel unexpectedly has a closed form".into());
    }
    let mut worst: f64 = 0.0;
    for i in 0..10_000u64 {
        let u = uniform_at(134_987, i, 0);
        let a = simulate_single(&closed, &[], u, f64::INFINITY, 0.0).map_err(|e| e.to_string())?;
        let b = simulate_single(&user, &[], u, f64::INFINITY, 0.0).map_err(|e| e.to_string())?;
        worst = worst.max(rel(b.time, a.time));
    }
    let elapsed = start.elapsed();
    let detail = format!("max relative difference {worst:.2e} (< 1e-6), {:.2} s (< 5 s)", elapsed.as_secs_f64());
    if worst < 1e-6 && elapsed < Duration::from_secs(5) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Criterion 2: Quadrature of the log-cubic hazard against a fine trapezoid rule.
fn c2_quadrature_accuracy() -> Outcome {
    let model = HazardModel::user(UserScale::LogHazard, LOG_CUBIC)
        .unwrap()
        .with_covariates(vec![CovariateEffect::new("trt", -0.5)])
        .with_order(30);
    let h = model.bind(&["trt"], Clock::Forward).unwrap();
    let oracle = trapezoid(log_cubic_hazard, 0.0, 1.5, 1_000_000);
    let mut worst: f64 = 0.0;
    for trt in [0.0, 1.0] {
        let got = h.cumhaz(0.0, 1.5, 0.0, &[trt]).map_err(|e| e.to_string())?;
        worst = worst.max(rel(got, oracle * (-0.5 * trt).exp()));
    }
    let detail = format!("H(1.5) = {oracle:.12}, max relative error {worst:.2e} (< 1e-9)");
    if worst < 1e-9 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Criterion 3: Left-truncated draws against unconditional draws that survived.
fn c3_conditional_sampling() -> Outcome {
    let n = 20_000;
    let model = HazardModel::weibull(0.1, 1.2);
    let run = |rows: usize, seed: u64, ltrunc: f64| {
        let table = CovariateTable::empty(rows);
        let job = SingleEventJob::new(&model, &table, seed, ObsValue::Scalar(f64::INFINITY), ObsValue::Scalar(ltrunc))
            .map_err(|e| e.to_string())?;
        run_single(&job, &table, None).map_err(|e| e.to_string())
    };
    let truncated = run(n, 1, 2.0)?.time;
    let filtered: Vec<f64> = run(30_000, 2, 0.0)?.time.into_iter().filter(|&t| t > 2.0).take(n).collect();
    if filtered.len() < n {
        return Err(format!("only {} unconditional draws exceeded 2", filtered.len()));
    }
    let d = ks_two_sample(&truncated, &filtered);
    let crit = ks_critical(0.01, n, n);
    let detail = format!("KS {d:.4} vs 1% critical {crit:.4}");
    if d < crit {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Criterion 4: Censoring fraction at maxtime 1.5 on the log-cubic model.
fn c4_censoring() -> Outcome {
    let n = 50_000;
    let model = HazardModel::user(UserScale::LogHazard, LOG_CUBIC)
        .unwrap()
        .with_covariates(vec![CovariateEffect::new("trt", -0.5)]);
    let table = bernoulli_trt(n, 500);
    let job = SingleEventJob::new(&model, &table, 134_987, ObsValue::Scalar(1.5), ObsValue::Scalar(0.0))
        .map_err(|e| e.to_string())?;
    let out = run_single(&job, &table, None).map_err(|e| e.to_string())?;
    let h0 = trapezoid(log_cubic_hazard, 0.0, 1.5, 1_000_000);
    let expected = (0..n)
        .map(|i| (-h0 * (-0.5 * table.row(i)[0]).exp()).exp())
        .sum::<f64>()
        / n as f64;
    let observed = out.censored() as f64 / n as f64;
    for i in 0..n {
        let capped = out.rc[i].code() == 3;
        if capped != !out.event[i] || (capped && out.time[i] != 1.5) || (!capped && out.time[i].partial_cmp(&1.5) != Some(std::cmp::Ordering::Less)) {
            return Err(format!("row {}: time {} event {} rc {}", i + 1, out.time[i], out.event[i], out.rc[i].code()));
        }
    }
    let detail = format!("censored fraction {observed:.4} vs oracle {expected:.4} (±0.01); all censored rows rc=3 at 1.5");
    if (observed - expected).abs() <= 0.01 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Criterion 5: Competing-risks occupation at t = 10 against the oracle, and the
/// published 1,000-observation tabulation against oracle binomial bands.
fn c5_competing_risks() -> Outcome {
    let n = 100_000;
    let spec = MsmSpec::competing_risks(
        vec![
            HazardModel::weibull(0.1, 0.8),
            HazardModel::exponential(0.02).with_covariates(vec![CovariateEffect::new("trt", -0.5)]),
        ],
        ObsValue::Scalar(10.0),
    )
    .unwrap();
    let table = bernoulli_trt(n, 1000);
    let job = MsmJob::new(&spec, &table, 9865).map_err(|e| e.to_string())?;
    let ds = run_msm(&job, &table, None).map_err(|e| e.to_string())?;
    let sim = occupation_fractions(&ds.paths, 3, 10.0).map_err(|e| e.to_string())?;
    let bound = job.bound();
    let by_trt = [0.0, 1.0].map(|trt| oracle_occupation(bound, &[trt], 1, 0.0, 10.0).unwrap());
    let treated = (0..n).filter(|&i| table.row(i)[0] == 1.0).count() as f64 / n as f64;
    let oracle: Vec<f64> = (0..3).map(|s| (1.0 - treated) * by_trt[0][s] + treated * by_trt[1][s]).collect();
    let gap = (0..3).map(|s| (sim[s] - oracle[s]).abs()).fold(0.0, f64::max);
    // published counts for 1,000 observations with trt ~ Bernoulli(0.5)
    let population: Vec<f64> = (0..3).map(|s| 0.5 * (by_trt[0][s] + by_trt[1][s])).collect();
    let published = [484.0, 414.0, 102.0];
    let mut bands_ok = true;
    let mut z = Vec::new();
    for s in 0..3 {
        let mean = 1000.0 * population[s];
        let sd = (1000.0 * population[s] * (1.0 - population[s])).sqrt();
        let score = (published[s] - mean) / sd;
        bands_ok &= score.abs() <= 3.0;
        z.push(format!("{score:+.2}"));
    }
    let detail = format!(
        "simulated {:.4}/{:.4}/{:.4} vs oracle {:.4}/{:.4}/{:.4}, max gap {gap:.4} (±0.005); published counts z = {}",
        sim[0],
        sim[1],
        sim[2],
        oracle[0],
        oracle[1],
        oracle[2],
        z.join("/")
    );
    if gap <= 0.005 && bands_ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Matrix exponential by scaling and squaring with a Taylor series.
fn expm(q: &[[f64; 3]; 3], t: f64) -> [[f64; 3]; 3] {
    let norm = q.iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max) * t;
    let squarings = (norm / 0.25).log2().ceil().max(0.0) as u32;
    let scale = t / 2f64.powi(squarings as i32);
    let mul = |a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]| {
        let mut c = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        c
    };
    let a = q.map(|r| r.map(|x| x * scale));
    let mut result = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut term = result;
    for n in 1..30 {
        term = mul(&term, &a).map(|r| r.map(|x| x / n as f64));
        for i in 0..3 {
            for j in 0..3 {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        result = mul(&result, &result);
    }
    result
}

/// Criterion 6: Exponential illness-death occupation against the matrix exponential.
fn c6_illness_death() -> Outcome {
    let (a, b, c) = (0.25, 0.1, 0.6);
    let spec = MsmSpec::new(
        matrix(&[&[None, Some(1), Some(2)], &[None, None, Some(3)], &[None, None, None]]),
        vec![
            TransitionHazard::new(HazardModel::exponential(a)),
            TransitionHazard::new(HazardModel::exponential(b)),
            TransitionHazard::new(HazardModel::exponential(c)),
        ],
        ObsValue::Scalar(3.0),
    );
    let table = CovariateTable::empty(50_000);
    let job = MsmJob::new(&spec, &table, 31).map_err(|e| e.to_string())?;
    let ds = run_msm(&job, &table, None).map_err(|e| e.to_string())?;
    let q = [[-(a + b), a, b], [0.0, -c, c], [0.0, 0.0, 0.0]];
    let mut gap: f64 = 0.0;
    for at in [0.5, 1.0, 2.0, 3.0] {
        let truth = expm(&q, at)[0];
        let sim = occupation_fractions(&ds.paths, 3, at).map_err(|e| e.to_string())?;
        for s in 0..3 {
            gap = gap.max((sim[s] - truth[s]).abs());
        }
    }
    let detail = format!("max |simulated - matrix exponential| over t in {{0.5,1,2,3}} = {gap:.4} (±0.01)");
    if gap <= 0.01 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Criterion 7: Clock-reset sojourns against fresh Weibull draws.
fn c7_reset() -> Outcome {
    let n = 20_000;
    let spec = MsmSpec::new(
        matrix(&[&[None, Some(1), Some(2)], &[None, None, Some(3)], &[None, None, None]]),
        vec![
            TransitionHazard::new(HazardModel::exponential(0.6)),
            TransitionHazard::new(HazardModel::exponential(0.2)),
            TransitionHazard::reset(HazardModel::weibull(0.05, 1.5)),
        ],
        ObsValue::Scalar(1e6),
    );
    // enough rows that at least n pass through the intermediate state
    let table = CovariateTable::empty(30_000);
    let job = MsmJob::new(&spec, &table, 44).map_err(|e| e.to_string())?;
    let ds = run_msm(&job, &table, None).map_err(|e| e.to_string())?;
    let sojourns: Vec<f64> = ds
        .paths
        .iter()
        .filter(|p| p.steps.first().is_some_and(|s| s.state == 2))
        .map(|p| p.steps[1].time - p.steps[0].time)
        .take(n)
        .collect();
    if sojourns.len() < n {
        return Err(format!("only {} paths visited the intermediate state", sojourns.len()));
    }
    let fresh_table = CovariateTable::empty(n);
    let fresh_job = SingleEventJob::new(
        &HazardModel::weibull(0.05, 1.5),
        &fresh_table,
        45,
        ObsValue::Scalar(f64::INFINITY),
        ObsValue::Scalar(0.0),
    )
    .map_err(|e| e.to_string())?;
    let fresh = run_single(&fresh_job, &fresh_table, None).map_err(|e| e.to_string())?.time;
    let d = ks_two_sample(&sojourns, &fresh);
    let crit = ks_critical(0.01, n, n);
    let detail = format!("KS {d:.4} vs 1% critical {crit:.4}");
    if d < crit {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Criterion 8: Total cumulative hazard of a kernel on two timescales.
fn c8_multiple_timescales() -> Outcome {
    let kernel = "0.1:*{t}:^1.5:*exp(-0.05:*({t}-{t0}))";
    let h3 = HazardModel::user(UserScale::Hazard, kernel)
        .unwrap()
        .with_covariates(vec![CovariateEffect::new("trt", -0.5)])
        .with_tde(
            vec![CovariateEffect::new("trt", 0.1)],
            Some(hazsim_core::parse("log({t})").unwrap()),
        );
    let spec = MsmSpec::new(
        matrix(&[&[None, Some(1), Some(2)], &[None, None, Some(3)], &[None, None, None]]),
        vec![
            TransitionHazard::new(HazardModel::exponential(0.1)),
            TransitionHazard::new(HazardModel::weibull(0.01, 1.3)),
            TransitionHazard::new(h3),
        ],
        ObsValue::Scalar(3.0),
    );
    let bound = spec.bind(&["trt"]).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for trt in [0.0f64, 1.0] {
        let f = |t: f64| 0.1 * t.powf(1.5) * (-0.05 * (t - 1.0)).exp() * (-0.5 * trt + 0.1 * trt * t.ln()).exp();
        let oracle = simpson(f, 1.0, 3.0, 1_000_000);
        let got = bound.total_cumhaz(2, 1.0, 1.0, 3.0, &[trt]).map_err(|e| e.to_string())?;
        worst = worst.max(rel(got, oracle));
    }
    let detail = format!("max relative error {worst:.2e} (< 1e-8)");
    if worst < 1e-8 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

const REVERSIBLE: &str = r#"{
  "mode": "msm",
  "transmatrix": [[null, 1, 2], [3, null, 4], [null, null, null]],
  "hazards": [
    {"user": "exp(-2 :+ 0.2:* log({t}) :+ 0.1:*{t})", "covariates": [["trt", 0.1]]},
    {"distribution": "weibull", "lambda": 0.01, "gamma": 1.3, "covariates": [["trt", -0.5]]},
    {"distribution": "weibull", "lambda": 0.05, "gamma": 1},
    {"user": "0.1 :* {t} :^ 1.5", "covariates": [["trt", -0.5]], "tde": [["trt", 0.1]], "tdefunction": "log({t})"}
  ],
  "ltruncated": "@lt",
  "startstate": "@startstate",
  "maxtime": 3
}"#;

/// Criterion 9: Reversible illness-death output with 1 and 8 threads.
fn c9_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = dir.path().join("reversible.json");
    fs::write(&cfg, REVERSIBLE).map_err(|e| e.to_string())?;
    let mut cov = String::from("trt,lt,startstate\n");
    for i in 0..1000u64 {
        let trt = u8::from(uniform_at(9865, i, 0) > 0.5);
        let lt = 1.5 * uniform_at(9865, i, 1);
        let start = 1 + u8::from(uniform_at(9865, i, 2) > 0.5);
        cov.push_str(&format!("{trt},{lt},{start}\n"));
    }
    let input = dir.path().join("cov.csv");
    fs::write(&input, cov).map_err(|e| e.to_string())?;
    let run = |threads: &str, out: &Path| {
        let mut stdout = Vec::new();
        let mut stderr = Vec::new();
        let code = hazsim::cli::run_with(
            [
                "hazsim",
                "msm",
                "--config",
                cfg.to_str().unwrap(),
                "--input",
                input.to_str().unwrap(),
                "--seed",
                "9865",
                "--threads",
                threads,
                "--output",
                out.to_str().unwrap(),
            ],
            &mut stdout,
            &mut stderr,
        );
        if code == 0 {
            Ok(String::from_utf8_lossy(&stderr).into_owned())
        } else {
            Err(format!("exit {code}: {}", String::from_utf8_lossy(&stderr)))
        }
    };
    let (one, eight) = (dir.path().join("one.csv"), dir.path().join("eight.csv"));
    let notices = run("1", &one)?;
    run("8", &eight)?;
    let a = fs::read(&one).map_err(|e| e.to_string())?;
    let b = fs::read(&eight).map_err(|e| e.to_string())?;
    let first = notices.lines().next().unwrap_or_default().to_owned();
    let detail = format!("{} bytes each, identical: {}; {first}", a.len(), a == b);
    if a == b && !a.is_empty() {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_model(rng: &mut Substream) -> HazardModel {
    let lambda = (-3.0 * rng.next_uniform()).exp();
    let kind = rng.next_u64() % 5;
    let model = match kind {
        0 => HazardModel::exponential(lambda),
        1 => HazardModel::weibull(lambda, 0.5 + 1.5 * rng.next_uniform()),
        2 => HazardModel::gompertz(lambda, -0.3 + 0.6 * rng.next_uniform()),
        3 => HazardModel::user(UserScale::Hazard, &format!("{lambda}:*sqrt({{t}})")).unwrap(),
        _ => HazardModel::user(UserScale::LogHazard, &format!("log({lambda}):-0.2:*({{t}}:-{{t0}})")).unwrap(),
    };
    if rng.next_uniform() < 0.5 {
        model.with_covariates(vec![CovariateEffect::new("x", rng.next_uniform() - 0.5)])
    } else {
        model
    }
}

fn random_spec(rng: &mut Substream, n: usize) -> (MsmSpec, CovariateTable) {
    let k = 2 + (rng.next_u64() % 4) as usize;
    let mut entries = vec![vec![None; k]; k];
    let mut count = 0;
    for (r, row) in entries.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            if r != c && rng.next_uniform() < 0.4 {
                count += 1;
                *cell = Some(count);
            }
        }
    }
    if count == 0 {
        entries[0][1] = Some(1);
        count = 1;
    }
    let matrix = validate_transmatrix(&entries).unwrap();
    let hazards = (0..count)
        .map(|_| {
            let model = random_model(rng);
            if rng.next_uniform() < 0.3 {
                TransitionHazard::reset(model)
            } else {
                TransitionHazard::new(model)
            }
        })
        .collect();
    let maxtime = 0.5 + 7.5 * rng.next_uniform();
    let rows = (0..n).map(|_| vec![2.0 * rng.next_uniform() - 1.0]).collect();
    let table = CovariateTable::new(vec!["x".into()], rows).unwrap();
    let mut spec = MsmSpec::new(matrix, hazards, ObsValue::Scalar(maxtime));
    spec.ltruncated = ObsValue::PerObs((0..n).map(|_| 0.5 * maxtime * rng.next_uniform()).collect());
    spec.startstate = ObsValue::PerObs((0..n).map(|_| 1 + (rng.next_u64() % k as u64) as usize).collect());
    (spec, table)
}

/// Criterion 10: Structural invariants over randomized specs.
fn c10_structural() -> Outcome {
    let start = Instant::now();
    let mut rng = Substream::new(2718, 0);
    let mut paths_checked = 0usize;
    for case in 0..1000 {
        let (spec, table) = random_spec(&mut rng, 100);
        let fail = |msg: String| format!("spec {case}: {msg}");
        let job = MsmJob::new(&spec, &table, case as u64).map_err(|e| fail(e.to_string()))?;
        let ds = run_msm(&job, &table, None).map_err(|e| fail(e.to_string()))?;
        let maxtime = spec.maxtime.get(0);
        let longest = ds.paths.iter().map(|p| p.steps.len()).max().unwrap_or(0);
        if ds.n_steps() != longest.max(1) {
            return Err(fail(format!("{} stubs for longest path {longest}", ds.n_steps())));
        }
        let (names, rows) = msm_columns(&table, &ds);
        if names.len() != 1 + 2 + 3 * ds.n_steps() {
            return Err(fail(format!("{} output columns", names.len())));
        }
        let m = ds.n_steps();
        if ds.stub_notices()[2] != format!("variables event1 to event{m} created") {
            return Err(fail("stub notice mismatch".into()));
        }
        for (i, p) in ds.paths.iter().enumerate() {
            p.check(&spec.matrix, maxtime).map_err(|e| fail(format!("row {}: {e}", i + 1)))?;
            if p.time0 != spec.ltruncated.get(i) || p.state0 != spec.startstate.get(i) {
                return Err(fail(format!("row {}: wrong entry", i + 1)));
            }
            if spec.matrix.is_absorbing(p.state0) && !p.steps.is_empty() {
                return Err(fail(format!("row {}: absorbing start produced steps", i + 1)));
            }
            let back = path_from_wide(&rows[i][1..]).map_err(|e| fail(format!("row {}: {e}", i + 1)))?;
            if &back != p {
                return Err(fail(format!("row {}: wide row does not round-trip", i + 1)));
            }
            paths_checked += 1;
        }
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "1000 specs, {paths_checked} paths legal, monotone, censored only at maxtime; {:.1} s (< 60 s)",
        elapsed.as_secs_f64()
    );
    if elapsed < Duration::from_secs(60) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("parametric/user equivalence", c1_parametric_user_equivalence),
        ("quadrature accuracy", c2_quadrature_accuracy),
        ("conditional sampling", c3_conditional_sampling),
        ("censoring semantics", c4_censoring),
        ("competing-risks fractions", c5_competing_risks),
        ("illness-death Markov oracle", c6_illness_death),
        ("clock-reset semantics", c7_reset),
        ("multiple timescales", c8_multiple_timescales),
        ("determinism across threads", c9_determinism),
        ("structural invariants", c10_structural),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (verdict, detail) = match std::panic::catch_unwind(check) {
            Ok(Ok(d)) => ("PASS", d),
            Ok(Err(d)) => ("FAIL", d),
            Err(_) => ("FAIL", "panicked".to_owned()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {verdict} {name}: {detail}", i + 1);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
