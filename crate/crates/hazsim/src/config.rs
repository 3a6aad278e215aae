//! JSON run configuration.
//!
//! One document describes a run. Hazard keys mirror the simulation options
//! one-to-one; run keys (`n`, `input`, `seed`, `maxtime`, ...) may also be
//! given on the command line, which takes precedence.
//!
//! ```json
//! {
//!   "mode": "parametric",
//!   "distribution": "weibull",
//!   "lambdas": [0.1],
//!   "gammas": [1.2],
//!   "covariates": [["trt", -0.5], ["age", 0.01]],
//!   "n": 300,
//!   "seed": 134987,
//!   "maxtime": 5
//! }
//! ```
//!
//! `maxtime`, `ltruncated` and `startstate` accept a number or `"@column"`,
//! which reads per-observation values from the input table.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use hazsim_core::hazards::{CovariateEffect, Family, HazardModel, Kernel, Parametric, UserScale};
use hazsim_core::msm::{default_cr_matrix, validate_transmatrix, MsmSpec, TransitionHazard, TransitionMatrix};
use hazsim_core::quad;
use hazsim_core::table::{CovariateTable, ObsValue};
use hazsim_core::{parse, ExprAst};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Parametric,
    User,
    Msm,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Parametric => "parametric",
            Mode::User => "user",
            Mode::Msm => "msm",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        match s {
            "parametric" => Some(Mode::Parametric),
            "user" => Some(Mode::User),
            "msm" => Some(Mode::Msm),
            _ => None,
        }
    }
}

/// A schema or validation failure at a JSON field path such as
/// `hazards[1].lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

/// A number, or `@column` naming a per-observation column.
#[derive(Debug, Clone, PartialEq)]
pub enum Setting {
    Value(f64),
    Column(String),
}

impl Setting {
    /// Parse a command-line value.
    pub fn parse(field: &str, s: &str) -> Result<Self, ConfigError> {
        if let Some(col) = s.strip_prefix('@') {
            if col.is_empty() {
                return Err(ConfigError::new(field, "empty column name after '@'"));
            }
            return Ok(Setting::Column(col.to_owned()));
        }
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| !v.is_nan())
            .map(Setting::Value)
            .ok_or_else(|| ConfigError::new(field, format!("expected a number or @column, got '{s}'")))
    }

    /// Resolve against the covariate table.
    pub fn resolve(&self, field: &str, table: &CovariateTable) -> Result<ObsValue<f64>, ConfigError> {
        match self {
            Setting::Value(v) => Ok(ObsValue::Scalar(*v)),
            Setting::Column(name) => table
                .column(name)
                .map(ObsValue::PerObs)
                .ok_or_else(|| ConfigError::new(field, format!("column '{name}' not found in the input data"))),
        }
    }

    fn resolve_state(&self, field: &str, table: &CovariateTable) -> Result<ObsValue<usize>, ConfigError> {
        let to_state = |v: f64, what: String| {
            if v >= 1.0 && v.trunc() == v && v < 1e9 {
                Ok(v as usize)
            } else {
                Err(ConfigError::new(field, format!("{what}: state must be a positive integer, got {v}")))
            }
        };
        match self.resolve(field, table)? {
            ObsValue::Scalar(v) => Ok(ObsValue::Scalar(to_state(v, "value".into())?)),
            ObsValue::PerObs(vs) => vs
                .iter()
                .enumerate()
                .map(|(i, v)| to_state(*v, format!("row {}", i + 1)))
                .collect::<Result<Vec<_>, _>>()
                .map(ObsValue::PerObs),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawSetting {
    Number(f64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: Option<String>,
    distribution: Option<String>,
    lambdas: Option<Vec<f64>>,
    gammas: Option<Vec<f64>>,
    #[serde(default)]
    mixture: bool,
    pmix: Option<f64>,
    covariates: Option<Vec<(String, f64)>>,
    tde: Option<Vec<(String, f64)>>,
    tdefunction: Option<String>,
    hazard: Option<String>,
    loghazard: Option<String>,
    chazard: Option<String>,
    logchazard: Option<String>,
    hazards: Option<Vec<serde_json::Value>>,
    transmatrix: Option<Vec<Vec<Option<usize>>>>,
    n: Option<usize>,
    input: Option<PathBuf>,
    seed: Option<u64>,
    maxtime: Option<RawSetting>,
    ltruncated: Option<RawSetting>,
    startstate: Option<RawSetting>,
    nodes: Option<usize>,
    output: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHazard {
    distribution: Option<String>,
    lambda: Option<f64>,
    gamma: Option<f64>,
    user: Option<String>,
    loghazard: Option<String>,
    covariates: Option<Vec<(String, f64)>>,
    tde: Option<Vec<(String, f64)>>,
    tdefunction: Option<String>,
    #[serde(default)]
    reset: bool,
}

/// The hazard part of a run.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Single(HazardModel),
    Msm {
        matrix: TransitionMatrix,
        hazards: Vec<TransitionHazard>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Rows(usize),
    Input(PathBuf),
}

/// A validated configuration. Run keys are optional here; the command line
/// may supply or override them.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub model: ModelSpec,
    pub source: Option<Source>,
    pub seed: Option<u64>,
    pub maxtime: Option<Setting>,
    pub ltruncated: Option<Setting>,
    pub startstate: Option<Setting>,
    pub nodes: usize,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    /// Apply the quadrature order to every hazard.
    pub fn set_nodes(&mut self, nodes: usize) -> Result<(), ConfigError> {
        if !(quad::MIN_ORDER..=quad::MAX_ORDER).contains(&nodes) {
            return Err(ConfigError::new(
                "nodes",
                format!("must be between {} and {}", quad::MIN_ORDER, quad::MAX_ORDER),
            ));
        }
        self.nodes = nodes;
        match &mut self.model {
            ModelSpec::Single(m) => m.gl_order = nodes,
            ModelSpec::Msm { hazards, .. } => hazards.iter_mut().for_each(|h| h.model.gl_order = nodes),
        }
        Ok(())
    }

    /// Covariate names referenced anywhere in the model.
    pub fn referenced_covariates(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut add = |m: &HazardModel| {
            let mut names: Vec<&str> = m.covariates.iter().map(|c| c.name.as_str()).collect();
            if let Some(tde) = &m.tde {
                names.extend(tde.effects.iter().map(|c| c.name.as_str()));
            }
            if let Kernel::User { expr, .. } = &m.kernel {
                names.extend(expr.covariates());
            }
            for n in names {
                if !out.iter().any(|o| o == n) {
                    out.push(n.to_owned());
                }
            }
        };
        match &self.model {
            ModelSpec::Single(m) => add(m),
            ModelSpec::Msm { hazards, .. } => hazards.iter().for_each(|h| add(&h.model)),
        }
        out
    }

    /// The multi-state spec with run settings resolved against `table`.
    pub fn msm_spec(
        &self,
        table: &CovariateTable,
        maxtime: &Setting,
        ltruncated: Option<&Setting>,
        startstate: Option<&Setting>,
    ) -> Result<MsmSpec, ConfigError> {
        let ModelSpec::Msm { matrix, hazards } = &self.model else {
            return Err(ConfigError::new("mode", "not a multi-state configuration"));
        };
        let mut spec = MsmSpec::new(matrix.clone(), hazards.clone(), maxtime.resolve("maxtime", table)?);
        if let Some(l) = ltruncated {
            spec.ltruncated = l.resolve("ltruncated", table)?;
        }
        if let Some(s) = startstate {
            spec.startstate = s.resolve_state("startstate", table)?;
        }
        spec.gl_order = self.nodes;
        Ok(spec)
    }
}

/// Read and validate a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|e| ConfigError::new("", format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| json_error("", &e))?;
    build(raw)
}

fn json_error(prefix: &str, e: &serde_json::Error) -> ConfigError {
    let msg = e.to_string();
    // serde reports the offending key as "unknown field `x`"
    let field = msg
        .strip_prefix("unknown field `")
        .and_then(|rest| rest.split('`').next())
        .map(|f| join(prefix, f))
        .unwrap_or_else(|| prefix.to_owned());
    ConfigError::new(field, msg)
}

fn join(prefix: &str, field: &str) -> String {
    if prefix.is_empty() {
        field.to_owned()
    } else {
        format!("{prefix}.{field}")
    }
}

fn setting(field: &str, raw: Option<RawSetting>) -> Result<Option<Setting>, ConfigError> {
    match raw {
        None => Ok(None),
        Some(RawSetting::Number(v)) => Ok(Some(Setting::Value(v))),
        Some(RawSetting::Text(s)) => match s.strip_prefix('@') {
            Some(_) => Setting::parse(field, &s).map(Some),
            None => Err(ConfigError::new(field, format!("expected a number or \"@column\", got \"{s}\""))),
        },
    }
}

fn effects(pairs: Option<Vec<(String, f64)>>) -> Vec<CovariateEffect> {
    pairs
        .unwrap_or_default()
        .into_iter()
        .map(|(name, coef)| CovariateEffect::new(name, coef))
        .collect()
}

fn expression(field: &str, src: &str) -> Result<ExprAst, ConfigError> {
    parse(src).map_err(|e| ConfigError::new(field, format!("in \"{src}\": {e}")))
}

fn family(field: &str, name: &str) -> Result<Family, ConfigError> {
    Family::from_name(name).ok_or_else(|| {
        ConfigError::new(
            field,
            format!("unknown distribution '{name}' (expected exponential, weibull or gompertz)"),
        )
    })
}

fn attach_effects(
    prefix: &str,
    model: HazardModel,
    covariates: Option<Vec<(String, f64)>>,
    tde: Option<Vec<(String, f64)>>,
    tdefunction: Option<String>,
) -> Result<HazardModel, ConfigError> {
    let mut model = model.with_covariates(effects(covariates));
    match (tde, tdefunction) {
        (Some(t), f) => {
            let f = f.map(|s| expression(&join(prefix, "tdefunction"), &s)).transpose()?;
            model = model.with_tde(effects(Some(t)), f);
        }
        (None, Some(_)) => {
            return Err(ConfigError::new(join(prefix, "tdefunction"), "requires tde"));
        }
        (None, None) => {}
    }
    Ok(model)
}

fn check_model(prefix: &str, model: &HazardModel) -> Result<(), ConfigError> {
    model.validate().map_err(|v| ConfigError::new(prefix, v.join("; ")))
}

fn infer_mode(raw: &RawConfig) -> Mode {
    if raw.hazards.is_some() || raw.transmatrix.is_some() {
        Mode::Msm
    } else if raw.hazard.is_some() || raw.loghazard.is_some() || raw.chazard.is_some() || raw.logchazard.is_some() {
        Mode::User
    } else {
        Mode::Parametric
    }
}

fn build(raw: RawConfig) -> Result<RunConfig, ConfigError> {
    let mode = match &raw.mode {
        Some(m) => Mode::from_name(m).ok_or_else(|| {
            ConfigError::new("mode", format!("unknown mode '{m}' (expected parametric, user or msm)"))
        })?,
        None => infer_mode(&raw),
    };
    if raw.n.is_some() && raw.input.is_some() {
        return Err(ConfigError::new("n", "give either n or input, not both"));
    }
    if raw.n == Some(0) {
        return Err(ConfigError::new("n", "must be at least 1"));
    }
    let nodes = raw.nodes.unwrap_or(quad::DEFAULT_ORDER);
    let forbid = |present: bool, field: &str| {
        if present {
            Err(ConfigError::new(field, format!("not allowed in {} mode", mode.name())))
        } else {
            Ok(())
        }
    };
    let user_keys = [
        ("hazard", raw.hazard.is_some()),
        ("loghazard", raw.loghazard.is_some()),
        ("chazard", raw.chazard.is_some()),
        ("logchazard", raw.logchazard.is_some()),
    ];
    let single_keys = [
        ("distribution", raw.distribution.is_some()),
        ("lambdas", raw.lambdas.is_some()),
        ("gammas", raw.gammas.is_some()),
        ("mixture", raw.mixture),
        ("pmix", raw.pmix.is_some()),
        ("covariates", raw.covariates.is_some()),
        ("tde", raw.tde.is_some()),
        ("tdefunction", raw.tdefunction.is_some()),
    ];
    let model = match mode {
        Mode::Parametric => {
            for (k, p) in user_keys {
                forbid(p, k)?;
            }
            forbid(raw.hazards.is_some(), "hazards")?;
            forbid(raw.transmatrix.is_some(), "transmatrix")?;
            forbid(raw.startstate.is_some(), "startstate")?;
            let dist = raw
                .distribution
                .as_deref()
                .ok_or_else(|| ConfigError::new("distribution", "required in parametric mode"))?;
            let fam = family("distribution", dist)?;
            let lambdas = raw
                .lambdas
                .clone()
                .ok_or_else(|| ConfigError::new("lambdas", "required in parametric mode"))?;
            let gammas = raw.gammas.clone().unwrap_or_default();
            let kernel = if raw.mixture {
                let pmix = raw
                    .pmix
                    .ok_or_else(|| ConfigError::new("pmix", "required with mixture"))?;
                Kernel::Mixture {
                    family: fam,
                    pmix,
                    lambdas,
                    gammas,
                }
            } else {
                forbid(raw.pmix.is_some(), "pmix").map_err(|_| ConfigError::new("pmix", "requires mixture"))?;
                if lambdas.len() != 1 {
                    return Err(ConfigError::new("lambdas", "exactly one value required without mixture"));
                }
                let p = match fam {
                    Family::Exponential => {
                        if !gammas.is_empty() {
                            return Err(ConfigError::new("gammas", "not used by the exponential distribution"));
                        }
                        Parametric::exponential(lambdas[0])
                    }
                    Family::Weibull | Family::Gompertz => {
                        if gammas.len() != 1 {
                            return Err(ConfigError::new(
                                "gammas",
                                format!("exactly one value required for {dist}"),
                            ));
                        }
                        if fam == Family::Weibull {
                            Parametric::weibull(lambdas[0], gammas[0])
                        } else {
                            Parametric::gompertz(lambdas[0], gammas[0])
                        }
                    }
                };
                Kernel::Parametric(p)
            };
            let model = attach_effects("", HazardModel::new(kernel), raw.covariates, raw.tde, raw.tdefunction)?
                .with_order(nodes);
            check_model("", &model)?;
            ModelSpec::Single(model)
        }
        Mode::User => {
            for (k, p) in &single_keys[..5] {
                forbid(*p, k)?;
            }
            forbid(raw.hazards.is_some(), "hazards")?;
            forbid(raw.transmatrix.is_some(), "transmatrix")?;
            forbid(raw.startstate.is_some(), "startstate")?;
            let given: Vec<(UserScale, &str, &String)> = [
                (UserScale::Hazard, "hazard", &raw.hazard),
                (UserScale::LogHazard, "loghazard", &raw.loghazard),
                (UserScale::CumHazard, "chazard", &raw.chazard),
                (UserScale::LogCumHazard, "logchazard", &raw.logchazard),
            ]
            .into_iter()
            .filter_map(|(s, k, v)| v.as_ref().map(|v| (s, k, v)))
            .collect();
            let [(scale, key, src)] = given[..] else {
                return Err(ConfigError::new(
                    "hazard",
                    "exactly one of hazard, loghazard, chazard or logchazard is required in user mode",
                ));
            };
            let expr = expression(key, src)?;
            let model = attach_effects(
                "",
                HazardModel::new(Kernel::User { scale, expr }),
                raw.covariates,
                raw.tde,
                raw.tdefunction,
            )?
            .with_order(nodes);
            check_model("", &model)?;
            ModelSpec::Single(model)
        }
        Mode::Msm => {
            for (k, p) in user_keys.iter().chain(single_keys.iter()) {
                forbid(*p, k)?;
            }
            let list = raw
                .hazards
                .ok_or_else(|| ConfigError::new("hazards", "required in msm mode"))?;
            let mut hazards = Vec::with_capacity(list.len());
            for (i, value) in list.into_iter().enumerate() {
                let prefix = format!("hazards[{i}]");
                let rh: RawHazard = serde_json::from_value(value).map_err(|e| json_error(&prefix, &e))?;
                hazards.push(transition_hazard(&prefix, rh, nodes)?);
            }
            let matrix = match raw.transmatrix {
                Some(rows) => validate_transmatrix(&rows).map_err(|e| ConfigError::new("transmatrix", e.to_string()))?,
                None => default_cr_matrix(hazards.len()).map_err(|e| ConfigError::new("hazards", e.to_string()))?,
            };
            let spec = MsmSpec::new(matrix.clone(), hazards.clone(), ObsValue::Scalar(f64::INFINITY));
            spec.check().map_err(|e| ConfigError::new("hazards", e.to_string()))?;
            ModelSpec::Msm { matrix, hazards }
        }
    };
    let mut cfg = RunConfig {
        mode,
        model,
        source: raw.n.map(Source::Rows).or(raw.input.map(Source::Input)),
        seed: raw.seed,
        maxtime: setting("maxtime", raw.maxtime)?,
        ltruncated: setting("ltruncated", raw.ltruncated)?,
        startstate: setting("startstate", raw.startstate)?,
        nodes,
        output: raw.output,
    };
    cfg.set_nodes(nodes)?;
    Ok(cfg)
}

fn transition_hazard(prefix: &str, rh: RawHazard, nodes: usize) -> Result<TransitionHazard, ConfigError> {
    let kernel = match (&rh.distribution, &rh.user, &rh.loghazard) {
        (Some(dist), None, None) => {
            let fam = family(&join(prefix, "distribution"), dist)?;
            let lambda = rh
                .lambda
                .ok_or_else(|| ConfigError::new(join(prefix, "lambda"), "required with distribution"))?;
            let p = match (fam, rh.gamma) {
                (Family::Exponential, None) => Parametric::exponential(lambda),
                (Family::Exponential, Some(_)) => {
                    return Err(ConfigError::new(
                        join(prefix, "gamma"),
                        "not used by the exponential distribution",
                    ))
                }
                (Family::Weibull, Some(g)) => Parametric::weibull(lambda, g),
                (Family::Gompertz, Some(g)) => Parametric::gompertz(lambda, g),
                (_, None) => {
                    return Err(ConfigError::new(join(prefix, "gamma"), format!("required for {dist}")));
                }
            };
            Kernel::Parametric(p)
        }
        (None, Some(src), None) => {
            only_distribution_params(prefix, &rh)?;
            Kernel::User {
                scale: UserScale::Hazard,
                expr: expression(&join(prefix, "user"), src)?,
            }
        }
        (None, None, Some(src)) => {
            only_distribution_params(prefix, &rh)?;
            Kernel::User {
                scale: UserScale::LogHazard,
                expr: expression(&join(prefix, "loghazard"), src)?,
            }
        }
        _ => {
            return Err(ConfigError::new(
                prefix,
                "exactly one of distribution, user or loghazard is required",
            ))
        }
    };
    let model = attach_effects(prefix, HazardModel::new(kernel), rh.covariates, rh.tde, rh.tdefunction)?
        .with_order(nodes);
    check_model(prefix, &model)?;
    Ok(TransitionHazard {
        model,
        reset: rh.reset,
    })
}

fn only_distribution_params(prefix: &str, rh: &RawHazard) -> Result<(), ConfigError> {
    if rh.lambda.is_some() {
        return Err(ConfigError::new(join(prefix, "lambda"), "only used with distribution"));
    }
    if rh.gamma.is_some() {
        return Err(ConfigError::new(join(prefix, "gamma"), "only used with distribution"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_parametric() {
        let cfg = parse_config(
            r#"{"distribution":"weibull","lambdas":[0.1],"gammas":[1.2],"n":300,"seed":134987,"maxtime":5}"#,
        )
        .unwrap();
        assert_eq!(cfg.mode, Mode::Parametric);
        assert_eq!(cfg.source, Some(Source::Rows(300)));
        assert_eq!(cfg.seed, Some(134987));
        assert_eq!(cfg.maxtime, Some(Setting::Value(5.0)));
        assert_eq!(cfg.model, ModelSpec::Single(HazardModel::weibull(0.1, 1.2)));
    }

    #[test]
    fn illness_death_msm() {
        let cfg = parse_config(
            r#"{
              "mode": "msm",
              "hazards": [
                {"distribution": "weibull", "lambda": 0.1, "gamma": 1.2, "covariates": [["trt", -0.5]]},
                {"distribution": "weibull", "lambda": 0.1, "gamma": 1.5},
                {"user": "0.1:*{t}:^0.5", "reset": true}
              ],
              "transmatrix": [[null, 1, 2], [null, null, 3], [null, null, null]],
              "maxtime": "@fu"
            }"#,
        )
        .unwrap();
        let ModelSpec::Msm { matrix, hazards } = &cfg.model else {
            panic!("expected msm")
        };
        assert_eq!(matrix.n_transitions(), 3);
        assert!(hazards[2].reset);
        assert_eq!(cfg.maxtime, Some(Setting::Column("fu".into())));
        assert_eq!(cfg.referenced_covariates(), ["trt"]);
    }

    #[test]
    fn competing_risks_default_matrix() {
        let cfg = parse_config(
            r#"{"hazards":[{"distribution":"exponential","lambda":0.1},{"distribution":"exponential","lambda":0.2}]}"#,
        )
        .unwrap();
        let ModelSpec::Msm { matrix, .. } = cfg.model else { panic!() };
        assert_eq!(matrix.transitions(), &[(1, 2), (1, 3)]);
    }

    #[test]
    fn n_and_input_are_exclusive() {
        let err = parse_config(r#"{"distribution":"exponential","lambdas":[0.1],"n":5,"input":"x.csv"}"#).unwrap_err();
        assert_eq!(err.path, "n");
    }

    #[test]
    fn errors_carry_field_paths() {
        let err = parse_config(r#"{"hazards":[{"distribution":"weibull","lambda":0.1}]}"#).unwrap_err();
        assert_eq!(err.path, "hazards[0].gamma");
        let err = parse_config(r#"{"hazards":[{"distribution":"exponential","lambda":0.1,"bogus":1}]}"#).unwrap_err();
        assert_eq!(err.path, "hazards[0].bogus");
        let err = parse_config(r#"{"distribution":"weibull","lambdas":[-1],"gammas":[1]}"#).unwrap_err();
        assert!(err.message.contains("lambda must be positive"), "{err}");
        let err = parse_config(r#"{"hazards":[{"distribution":"exponential","lambda":0.1}],"transmatrix":[[null,2],[null,null]]}"#)
            .unwrap_err();
        assert_eq!(err.path, "transmatrix");
    }

    #[test]
    fn malformed_expression_cites_offset() {
        let err = parse_config(r#"{"mode":"user","loghazard":"-1:+0.02:*{t}:+"}"#).unwrap_err();
        assert_eq!(err.path, "loghazard");
        assert!(err.message.contains("offset"), "{err}");
    }

    #[test]
    fn setting_parse() {
        assert_eq!(Setting::parse("maxtime", "1.5").unwrap(), Setting::Value(1.5));
        assert_eq!(Setting::parse("maxtime", "@fu").unwrap(), Setting::Column("fu".into()));
        assert!(Setting::parse("maxtime", "abc").is_err());
        assert!(Setting::parse("maxtime", "@").is_err());
    }
}
