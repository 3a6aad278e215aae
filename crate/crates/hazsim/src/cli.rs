//! Command-line front end.
//!
//! Exit status: 0 on success, 2 on usage, configuration or input errors,
//! 1 when a simulation fails part-way or output cannot be written.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use hazsim_core::engine::SingleEventJob;
use hazsim_core::msm::MsmJob;
use hazsim_core::table::{CovariateTable, ObsValue};

use crate::config::{load_config, ConfigError, Mode, ModelSpec, RunConfig, Setting, Source};
use crate::{dataio, runner, validate};

#[derive(Debug, Parser)]
#[command(name = "hazsim", version, about = "Simulate survival and multi-state data from hazard models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Single-event times from exponential, Weibull or Gompertz hazards.
    Parametric(RunArgs),
    /// Single-event times from a user-defined hazard expression.
    User(RunArgs),
    /// Competing-risks and multi-state paths.
    Msm(RunArgs),
    /// Compare a simulated dataset with its generating configuration.
    Validate(ValidateArgs),
    /// Parse and validate a configuration file.
    CheckConfig(CheckArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Random seed (required here or in the configuration).
    #[arg(long)]
    seed: Option<u64>,
    /// Generate this many observations without covariates.
    #[arg(long, conflicts_with = "input")]
    n: Option<usize>,
    /// CSV file of covariates, one observation per row.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output CSV (default: standard output).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Right-censoring time: a number or @column.
    #[arg(long, value_name = "NUM|@COLUMN")]
    maxtime: Option<String>,
    /// Entry (left-truncation) time: a number or @column. Default 0.
    #[arg(long, value_name = "NUM|@COLUMN")]
    ltruncated: Option<String>,
    /// Starting state for msm: a number or @column. Default 1.
    #[arg(long, value_name = "NUM|@COLUMN")]
    startstate: Option<String>,
    /// Gauss-Legendre nodes per panel for numeric cumulative hazards.
    #[arg(long)]
    nodes: Option<usize>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// The configuration the data was generated from.
    #[arg(long)]
    config: PathBuf,
    /// Simulated dataset (CSV written by a simulation subcommand).
    #[arg(long)]
    data: PathBuf,
    /// Entry times used for the run: a number or @column. Default 0.
    #[arg(long, value_name = "NUM|@COLUMN")]
    ltruncated: Option<String>,
    /// Censoring time of the run; msm query times default to fractions of it.
    #[arg(long, value_name = "NUM|@COLUMN")]
    maxtime: Option<String>,
    /// Comma-separated query times for msm occupation tables.
    #[arg(long, value_delimiter = ',')]
    times: Option<Vec<f64>>,
    /// Gauss-Legendre nodes per panel.
    #[arg(long)]
    nodes: Option<usize>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    config: PathBuf,
}

/// A failure with its exit status.
#[derive(Debug)]
pub enum CliError {
    /// Usage, configuration or input problems (exit 2).
    Usage(String),
    /// Simulation or output failures (exit 1).
    Runtime(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(format!("configuration error: {e}"))
    }
}

fn usage(msg: impl fmt::Display) -> CliError {
    CliError::Usage(msg.to_string())
}

fn runtime(msg: impl fmt::Display) -> CliError {
    CliError::Runtime(msg.to_string())
}

/// Run with the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Run with explicit output streams; returns the exit status.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Parametric(a) => simulate(Mode::Parametric, a, out, err),
        Command::User(a) => simulate(Mode::User, a, out, err),
        Command::Msm(a) => simulate(Mode::Msm, a, out, err),
        Command::Validate(a) => validate_cmd(a, out),
        Command::CheckConfig(a) => check_config(&a.config, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn load(path: &Path, nodes: Option<usize>) -> Result<RunConfig, CliError> {
    let mut cfg = load_config(path)?;
    if let Some(n) = nodes {
        cfg.set_nodes(n)?;
    }
    Ok(cfg)
}

fn cli_setting(field: &str, flag: Option<&str>, cfg: &Option<Setting>) -> Result<Option<Setting>, CliError> {
    match flag {
        Some(s) => Ok(Some(Setting::parse(field, s)?)),
        None => Ok(cfg.clone()),
    }
}

fn load_table(source: &Source) -> Result<CovariateTable, CliError> {
    match source {
        Source::Rows(k) => Ok(CovariateTable::empty(*k)),
        Source::Input(p) => dataio::read_covariates(p).map_err(usage),
    }
}

fn check_covariates(cfg: &RunConfig, table: &CovariateTable, source: &Source) -> Result<(), CliError> {
    for name in cfg.referenced_covariates() {
        if table.column_index(&name).is_none() {
            let hint = match source {
                Source::Rows(_) => " (--n generates observations without covariates; use --input)",
                Source::Input(_) => "",
            };
            return Err(usage(format!("covariate '{name}' not found in the input data{hint}")));
        }
    }
    Ok(())
}

fn emit(
    names: &[String],
    rows: &[Vec<Option<f64>>],
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match output {
        Some(p) => dataio::write_dataset(p, names, rows).map_err(runtime),
        None => dataio::write_rows(out, names, rows).map_err(|e| runtime(format!("writing output: {e}"))),
    }
}

fn simulate(mode: Mode, a: RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let cfg = load(&a.config, a.nodes)?;
    if cfg.mode != mode {
        return Err(usage(format!(
            "{} describes a {} model; run `hazsim {}`",
            a.config.display(),
            cfg.mode.name(),
            cfg.mode.name()
        )));
    }
    let seed = a
        .seed
        .or(cfg.seed)
        .ok_or_else(|| usage("a seed is required (--seed or \"seed\" in the configuration)"))?;
    let source = match (a.n, &a.input) {
        (Some(0), _) => return Err(usage("--n must be at least 1")),
        (Some(k), None) => Source::Rows(k),
        (None, Some(p)) => Source::Input(p.clone()),
        _ => cfg
            .source
            .clone()
            .ok_or_else(|| usage("either --n or --input is required"))?,
    };
    let output = a.output.clone().or(cfg.output.clone());
    let maxtime = cli_setting("maxtime", a.maxtime.as_deref(), &cfg.maxtime)?;
    let ltruncated = cli_setting("ltruncated", a.ltruncated.as_deref(), &cfg.ltruncated)?;
    let startstate = cli_setting("startstate", a.startstate.as_deref(), &cfg.startstate)?;
    let table = load_table(&source)?;
    check_covariates(&cfg, &table, &source)?;
    match &cfg.model {
        ModelSpec::Single(model) => {
            if startstate.is_some() {
                return Err(usage("--startstate applies to msm only"));
            }
            let maxtime = match &maxtime {
                Some(s) => s.resolve("maxtime", &table)?,
                None => ObsValue::Scalar(f64::INFINITY),
            };
            let ltrunc = match &ltruncated {
                Some(s) => s.resolve("ltruncated", &table)?,
                None => ObsValue::Scalar(0.0),
            };
            let job = SingleEventJob::new(model, &table, seed, maxtime, ltrunc).map_err(usage)?;
            let result = runner::run_single(&job, &table, a.threads).map_err(runtime)?;
            let (names, rows) = runner::single_columns(&table, &result);
            emit(&names, &rows, output.as_deref(), out)?;
            if let Some(w) = runner::censoring_warning(result.censored()) {
                let _ = writeln!(err, "{w}");
            }
        }
        ModelSpec::Msm { .. } => {
            let maxtime = maxtime.ok_or_else(|| usage("msm requires maxtime (--maxtime or \"maxtime\")"))?;
            let spec = cfg.msm_spec(&table, &maxtime, ltruncated.as_ref(), startstate.as_ref())?;
            let job = MsmJob::new(&spec, &table, seed).map_err(usage)?;
            let ds = runner::run_msm(&job, &table, a.threads).map_err(runtime)?;
            let (names, rows) = runner::msm_columns(&table, &ds);
            emit(&names, &rows, output.as_deref(), out)?;
            for notice in ds.stub_notices() {
                let _ = writeln!(err, "{notice}");
            }
        }
    }
    Ok(())
}

fn check_config(path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = load(path, None)?;
    let detail = match &cfg.model {
        ModelSpec::Single(_) => String::new(),
        ModelSpec::Msm { matrix, .. } => format!(
            ", {} states, {} transitions",
            matrix.k_states(),
            matrix.n_transitions()
        ),
    };
    writeln!(out, "{}: valid {} configuration{detail}", path.display(), cfg.mode.name()).map_err(runtime)
}

fn column(data: &dataio::NumericTable, name: &str) -> Result<Vec<f64>, CliError> {
    let c = data
        .column_index(name)
        .ok_or_else(|| usage(format!("column '{name}' not found in the data")))?;
    data.rows
        .iter()
        .enumerate()
        .map(|(r, row)| row[c].ok_or_else(|| usage(format!("missing value at row {}, column {}", r + 1, c + 1))))
        .collect()
}

fn validate_cmd(a: ValidateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = load(&a.config, a.nodes)?;
    let data = dataio::read_numeric(&a.data).map_err(usage)?;
    let (table, gen_idx) = validate::split_dataset(&data).map_err(usage)?;
    if table.n_rows() == 0 {
        return Err(usage("the data has no observations"));
    }
    let report = match &cfg.model {
        ModelSpec::Single(model) => {
            let times = column(&data, "time")?;
            let events: Vec<bool> = column(&data, "event")?.into_iter().map(|e| e != 0.0).collect();
            let ltrunc = match cli_setting("ltruncated", a.ltruncated.as_deref(), &cfg.ltruncated)? {
                Some(s) => s.resolve("ltruncated", &table)?,
                None => ObsValue::Scalar(0.0),
            };
            validate::validate_single(model, &table, &times, &events, &ltrunc)
                .map_err(usage)?
                .render()
        }
        ModelSpec::Msm { .. } => {
            let paths = validate::paths_from_data(&data, &gen_idx).map_err(usage)?;
            let maxtime = cli_setting("maxtime", a.maxtime.as_deref(), &cfg.maxtime)?;
            let times = match a.times {
                Some(t) => t,
                None => {
                    let horizon = match &maxtime {
                        Some(s) => match s.resolve("maxtime", &table)? {
                            ObsValue::Scalar(v) => v,
                            ObsValue::PerObs(v) => v.into_iter().fold(f64::INFINITY, f64::min),
                        },
                        None => return Err(usage("give --times or --maxtime for msm validation")),
                    };
                    [0.25, 0.5, 0.75, 1.0].iter().map(|f| f * horizon).collect()
                }
            };
            let spec = cfg.msm_spec(&table, &Setting::Value(f64::INFINITY), None, None)?;
            validate::validate_msm(&spec, &table, &paths, &times)
                .map_err(usage)?
                .render()
        }
    };
    write!(out, "{report}").map_err(runtime)
}
