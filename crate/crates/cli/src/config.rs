//! Run configuration: a JSON document describing the bath, temperature, probe and grid.

use std::fmt;
use std::path::Path;

use leeyang_core::partition::uniform_couplings;
use leeyang_core::probe::{DEFAULT_MAGNITUDE_TOL, DEFAULT_MATCH_WINDOW, DEFAULT_STEPS};
use leeyang_core::{
    build_exact, build_long_range, build_ring, sx_top_eigenstate, HalfInt, PartitionPolynomial, ProbeState,
};
use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

/// Largest polynomial degree a config may request.
pub const MAX_DEGREE: usize = 4096;
/// Largest grid a config may request.
pub const MAX_STEPS: usize = 10_000_000;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("config syntax error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

/// One named error per config invariant; `field` is a JSON path.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("missing field `{field}`")]
    MissingField { field: &'static str },
    #[error("field `{field}` is not used by model kind `{kind}`")]
    UnexpectedField { field: &'static str, kind: &'static str },
    #[error("exactly one of `beta` or `T_over_J` must be given, found neither")]
    MissingTemperature,
    #[error("exactly one of `beta` or `T_over_J` must be given, found both")]
    ConflictingTemperature,
    #[error("`T_over_J` = 0 is not allowed; use a positive number or \"inf\"")]
    ZeroTemperature,
    #[error("`T_over_J` must be a positive number or \"inf\", got {value}")]
    InvalidTemperature { value: String },
    #[error("`beta` must be finite and non-negative, got {value}")]
    InvalidBeta { value: f64 },
    #[error("`{field}` must be at least {min}, got {value}")]
    TooSmall { field: &'static str, min: i64, value: i64 },
    #[error("`{field}` must be finite and non-negative, got {value}")]
    NegativeOrNonFinite { field: String, value: f64 },
    #[error("`{field}` must be finite and positive, got {value}")]
    NotPositive { field: &'static str, value: f64 },
    #[error("`{field}` must be finite, got {value}")]
    NotFinite { field: &'static str, value: f64 },
    #[error("`model.two_s` lists {found} spins but `model.n_spins` is {expected}")]
    SpinCount { expected: usize, found: usize },
    #[error("`model.couplings` must be {expected}x{expected}, found a row of length {found}")]
    CouplingShape { expected: usize, found: usize },
    #[error("`model.couplings[{i}][{i}]` must be 0, got {value}")]
    NonzeroDiagonal { i: usize, value: f64 },
    #[error("`model.couplings` is not symmetric at ({i}, {j}): {a} vs {b}")]
    AsymmetricCoupling { i: usize, j: usize, a: f64, b: f64 },
    #[error("model degree {degree} exceeds the limit of {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("`probe.delta` = {delta} must satisfy 1 <= delta <= two_s0 = {two_s0}")]
    DeltaOutOfRange { delta: u32, two_s0: u32 },
    #[error("`probe.state.amplitudes` needs two_s0 + 1 = {expected} entries, found {found}")]
    AmplitudeCount { expected: usize, found: usize },
    #[error("`probe.state.amplitudes[{index}]` is not finite")]
    AmplitudeNotFinite { index: usize },
    #[error("`probe.state.amplitudes` is the zero vector")]
    ZeroState,
    #[error("`grid.steps` must lie in 2..={max}, got {value}")]
    StepsOutOfRange { value: usize, max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ModelKind {
    Exact,
    LongRange,
    Ring,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SpinSpec {
    Uniform(u32),
    PerSite(Vec<u32>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum TemperatureSpec {
    Number(f64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum StateSpec {
    SxMax,
    #[serde(untagged)]
    Amplitudes {
        amplitudes: Vec<[f64; 2]>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    kind: ModelKind,
    n_spins: Option<usize>,
    two_s: Option<SpinSpec>,
    #[serde(rename = "J")]
    j: Option<f64>,
    couplings: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProbe {
    two_s0: u32,
    delta: u32,
    #[serde(default)]
    h0: f64,
    state: StateSpec,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    t_max: Option<f64>,
    steps: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    magnitude_tol: Option<f64>,
    match_window: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    model: RawModel,
    beta: Option<f64>,
    #[serde(rename = "T_over_J")]
    t_over_j: Option<TemperatureSpec>,
    probe: RawProbe,
    lambda: f64,
    #[serde(default)]
    grid: RawGrid,
    #[serde(default)]
    tolerances: RawTolerances,
}

/// A validated bath description.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelConfig {
    Exact { spins: Vec<HalfInt>, couplings: Vec<Vec<f64>> },
    LongRange { n_spins: usize, s: HalfInt, j: f64 },
    Ring { n_spins: usize, s: HalfInt, j: f64 },
}

impl ModelConfig {
    pub fn build(&self, beta: f64) -> leeyang_core::Result<PartitionPolynomial> {
        match self {
            ModelConfig::Exact { spins, couplings } => build_exact(spins, couplings, beta),
            ModelConfig::LongRange { n_spins, s, j } => build_long_range(*n_spins, *s, *j, beta),
            ModelConfig::Ring { n_spins, s, j } => build_ring(*n_spins, *s, *j, beta),
        }
    }

    pub fn degree(&self) -> usize {
        let doubled: usize = match self {
            ModelConfig::Exact { spins, .. } => spins.iter().map(|s| s.doubled() as usize).sum(),
            ModelConfig::LongRange { n_spins, s, .. } | ModelConfig::Ring { n_spins, s, .. } => {
                n_spins * s.doubled() as usize
            }
        };
        doubled
    }
}

impl fmt::Display for ModelConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelConfig::Exact { spins, couplings } => {
                let list: Vec<String> = spins.iter().map(|s| s.doubled().to_string()).collect();
                let rows: Vec<String> = couplings
                    .iter()
                    .map(|r| r.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" "))
                    .collect();
                write!(f, "exact n_spins={} two_s=[{}] couplings=[{}]", spins.len(), list.join(" "), rows.join("; "))
            }
            ModelConfig::LongRange { n_spins, s, j } => {
                write!(f, "long_range n_spins={n_spins} two_s={} J={j:?}", s.doubled())
            }
            ModelConfig::Ring { n_spins, s, j } => write!(f, "ring n_spins={n_spins} two_s={} J={j:?}", s.doubled()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateConfig {
    SxMax,
    Amplitudes(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    pub s0: HalfInt,
    pub delta: u32,
    pub h0: f64,
    pub state: StateConfig,
}

impl ProbeConfig {
    pub fn state(&self) -> leeyang_core::Result<ProbeState> {
        match &self.state {
            StateConfig::SxMax => sx_top_eigenstate(self.s0),
            StateConfig::Amplitudes(a) => ProbeState::normalized(self.s0, a.clone()),
        }
    }
}

/// A fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub beta: f64,
    pub probe: ProbeConfig,
    pub lambda: f64,
    /// `None` means one period `2π/(λδ)`.
    pub t_max: Option<f64>,
    pub steps: usize,
    pub magnitude_tol: f64,
    pub match_window: f64,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            line: e.line(),
            column: e.column(),
            message: strip_position(&e.to_string()),
        })?;
        Ok(validate(raw)?)
    }

    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / (self.lambda * f64::from(self.probe.delta))
    }

    pub fn t_max(&self) -> f64 {
        self.t_max.unwrap_or_else(|| self.period())
    }

    pub fn set_steps(&mut self, steps: usize) -> Result<(), ValidationError> {
        check_steps(steps)?;
        self.steps = steps;
        Ok(())
    }

    pub fn set_t_max(&mut self, t_max: f64) -> Result<(), ValidationError> {
        positive("grid.t_max", t_max)?;
        self.t_max = Some(t_max);
        Ok(())
    }
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

fn positive(field: &'static str, value: f64) -> Result<f64, ValidationError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ValidationError::NotPositive { field, value })
    }
}

fn check_steps(steps: usize) -> Result<(), ValidationError> {
    if (2..=MAX_STEPS).contains(&steps) {
        Ok(())
    } else {
        Err(ValidationError::StepsOutOfRange { value: steps, max: MAX_STEPS })
    }
}

fn spin(field: &'static str, two_s: u32) -> Result<HalfInt, ValidationError> {
    if two_s == 0 {
        return Err(ValidationError::TooSmall { field, min: 1, value: 0 });
    }
    let doubled = i32::try_from(two_s)
        .map_err(|_| ValidationError::DegreeTooLarge { degree: two_s as usize, max: MAX_DEGREE })?;
    Ok(HalfInt::from_doubled(doubled))
}

fn coupling(field: &str, j: f64) -> Result<f64, ValidationError> {
    if j >= 0.0 && j.is_finite() {
        Ok(j)
    } else {
        Err(ValidationError::NegativeOrNonFinite { field: field.to_string(), value: j })
    }
}

fn beta_of(raw_beta: Option<f64>, t: Option<TemperatureSpec>) -> Result<f64, ValidationError> {
    match (raw_beta, t) {
        (Some(_), Some(_)) => Err(ValidationError::ConflictingTemperature),
        (None, None) => Err(ValidationError::MissingTemperature),
        (Some(b), None) => {
            if b >= 0.0 && b.is_finite() {
                Ok(b)
            } else {
                Err(ValidationError::InvalidBeta { value: b })
            }
        }
        (None, Some(TemperatureSpec::Text(s))) => {
            if s == "inf" {
                Ok(0.0)
            } else {
                Err(ValidationError::InvalidTemperature { value: format!("{s:?}") })
            }
        }
        (None, Some(TemperatureSpec::Number(t))) => {
            if t == 0.0 {
                Err(ValidationError::ZeroTemperature)
            } else if t > 0.0 && t.is_finite() {
                Ok(1.0 / t)
            } else {
                Err(ValidationError::InvalidTemperature { value: t.to_string() })
            }
        }
    }
}

fn validate_model(raw: RawModel) -> Result<ModelConfig, ValidationError> {
    let n = raw.n_spins.ok_or(ValidationError::MissingField { field: "model.n_spins" })?;
    let two_s = raw.two_s.ok_or(ValidationError::MissingField { field: "model.two_s" })?;
    let model = match raw.kind {
        ModelKind::Exact => {
            if n < 1 {
                return Err(ValidationError::TooSmall { field: "model.n_spins", min: 1, value: 0 });
            }
            let spins = match two_s {
                SpinSpec::Uniform(d) => vec![spin("model.two_s", d)?; n],
                SpinSpec::PerSite(list) => {
                    if list.len() != n {
                        return Err(ValidationError::SpinCount { expected: n, found: list.len() });
                    }
                    list.into_iter().map(|d| spin("model.two_s", d)).collect::<Result<Vec<_>, _>>()?
                }
            };
            let couplings = match (raw.couplings, raw.j) {
                (Some(c), None) => {
                    validate_matrix(&c, n)?;
                    c
                }
                (None, Some(j)) => uniform_couplings(n, coupling("model.J", j)?),
                (Some(_), Some(_)) => return Err(ValidationError::UnexpectedField { field: "model.J", kind: "exact" }),
                (None, None) => return Err(ValidationError::MissingField { field: "model.J" }),
            };
            ModelConfig::Exact { spins, couplings }
        }
        ModelKind::LongRange | ModelKind::Ring => {
            let kind = if raw.kind == ModelKind::Ring { "ring" } else { "long_range" };
            if raw.couplings.is_some() {
                return Err(ValidationError::UnexpectedField { field: "model.couplings", kind });
            }
            let s = match two_s {
                SpinSpec::Uniform(d) => spin("model.two_s", d)?,
                SpinSpec::PerSite(_) => return Err(ValidationError::UnexpectedField { field: "model.two_s", kind }),
            };
            let j = coupling("model.J", raw.j.ok_or(ValidationError::MissingField { field: "model.J" })?)?;
            let min = if raw.kind == ModelKind::Ring { 3 } else { 1 };
            if n < min {
                return Err(ValidationError::TooSmall { field: "model.n_spins", min: min as i64, value: n as i64 });
            }
            // reject before n·2s can overflow
            if n > MAX_DEGREE {
                return Err(ValidationError::DegreeTooLarge { degree: n, max: MAX_DEGREE });
            }
            if raw.kind == ModelKind::Ring {
                ModelConfig::Ring { n_spins: n, s, j }
            } else {
                ModelConfig::LongRange { n_spins: n, s, j }
            }
        }
    };
    let degree = model.degree();
    if degree > MAX_DEGREE {
        return Err(ValidationError::DegreeTooLarge { degree, max: MAX_DEGREE });
    }
    Ok(model)
}

fn validate_matrix(c: &[Vec<f64>], n: usize) -> Result<(), ValidationError> {
    if c.len() != n {
        return Err(ValidationError::CouplingShape { expected: n, found: c.len() });
    }
    if let Some(row) = c.iter().find(|r| r.len() != n) {
        return Err(ValidationError::CouplingShape { expected: n, found: row.len() });
    }
    for i in 0..n {
        for j in 0..n {
            coupling(&format!("model.couplings[{i}][{j}]"), c[i][j])?;
        }
        if c[i][i] != 0.0 {
            return Err(ValidationError::NonzeroDiagonal { i, value: c[i][i] });
        }
        for j in 0..i {
            if c[i][j] != c[j][i] {
                return Err(ValidationError::AsymmetricCoupling { i, j, a: c[i][j], b: c[j][i] });
            }
        }
    }
    Ok(())
}

fn validate(raw: RawConfig) -> Result<RunConfig, ValidationError> {
    let model = validate_model(raw.model)?;
    let beta = beta_of(raw.beta, raw.t_over_j)?;

    let p = raw.probe;
    let s0 = spin("probe.two_s0", p.two_s0)?;
    if p.two_s0 as usize > MAX_DEGREE {
        return Err(ValidationError::DegreeTooLarge { degree: p.two_s0 as usize, max: MAX_DEGREE });
    }
    if p.delta == 0 || p.delta > p.two_s0 {
        return Err(ValidationError::DeltaOutOfRange { delta: p.delta, two_s0: p.two_s0 });
    }
    if !p.h0.is_finite() {
        return Err(ValidationError::NotFinite { field: "probe.h0", value: p.h0 });
    }
    let state = match p.state {
        StateSpec::SxMax => StateConfig::SxMax,
        StateSpec::Amplitudes { amplitudes } => {
            let expected = p.two_s0 as usize + 1;
            if amplitudes.len() != expected {
                return Err(ValidationError::AmplitudeCount { expected, found: amplitudes.len() });
            }
            if let Some(index) = amplitudes.iter().position(|[re, im]| !(re.is_finite() && im.is_finite())) {
                return Err(ValidationError::AmplitudeNotFinite { index });
            }
            let a: Vec<Complex64> = amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
            if a.iter().all(|z| z.norm_sqr() == 0.0) {
                return Err(ValidationError::ZeroState);
            }
            StateConfig::Amplitudes(a)
        }
    };
    let probe = ProbeConfig { s0, delta: p.delta, h0: p.h0, state };

    let lambda = positive("lambda", raw.lambda)?;
    let t_max = raw.grid.t_max.map(|t| positive("grid.t_max", t)).transpose()?;
    let steps = raw.grid.steps.unwrap_or(DEFAULT_STEPS);
    check_steps(steps)?;
    let magnitude_tol =
        positive("tolerances.magnitude_tol", raw.tolerances.magnitude_tol.unwrap_or(DEFAULT_MAGNITUDE_TOL))?;
    let match_window =
        positive("tolerances.match_window", raw.tolerances.match_window.unwrap_or(DEFAULT_MATCH_WINDOW))?;

    Ok(RunConfig { model, beta, probe, lambda, t_max, steps, magnitude_tol, match_window })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "model": {"kind": "exact", "n_spins": 2, "two_s": 1, "J": 1.0},
        "beta": 1.0,
        "probe": {"two_s0": 1, "delta": 1, "h0": 0.0, "state": "sx_max"},
        "lambda": 1.0
    }"#;

    #[test]
    fn minimal_config_takes_defaults() {
        let c = RunConfig::from_json(BASE).unwrap();
        assert_eq!(c.steps, DEFAULT_STEPS);
        assert_eq!(c.magnitude_tol, DEFAULT_MAGNITUDE_TOL);
        assert_eq!(c.match_window, DEFAULT_MATCH_WINDOW);
        assert!((c.t_max() - std::f64::consts::TAU).abs() < 1e-15);
        assert_eq!(c.model.degree(), 2);
    }

    #[test]
    fn temperature_inf_means_zero_beta() {
        let text = BASE.replace(r#""beta": 1.0"#, r#""T_over_J": "inf""#);
        assert_eq!(RunConfig::from_json(&text).unwrap().beta, 0.0);
        let text = BASE.replace(r#""beta": 1.0"#, r#""T_over_J": 8"#);
        assert_eq!(RunConfig::from_json(&text).unwrap().beta, 0.125);
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let text = BASE.replace(r#""lambda": 1.0"#, r#""lambda": 1.0,"#);
        match RunConfig::from_json(&text) {
            Err(ConfigError::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("{other:?}"),
        }
    }
}
