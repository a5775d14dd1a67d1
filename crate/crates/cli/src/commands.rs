//! The four subcommands as library calls.

use std::fs;
use std::path::{Path, PathBuf};

use leeyang_core::{
    correlate_with, expectation_series, find_zeros, predicted_zero_times, zero_time, CorrelationReport,
    PartitionPolynomial, ProbeSignal, TimeSeries, ZeroSet,
};
use num_complex::Complex64;
use thiserror::Error;

use crate::config::{ConfigError, RunConfig, StateConfig, ValidationError};
use crate::output::{
    fmt_f64, DetectedJson, FormatError, MatchJson, Metadata, Report, SeriesRow, SeriesTable, ZeroRow, ZerosTable,
};
use crate::presets::Figure;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] leeyang_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
}

impl From<ValidationError> for CliError {
    fn from(e: ValidationError) -> Self {
        CliError::Config(ConfigError::Invalid(e))
    }
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(_) | CliError::Format { .. } => 3,
            CliError::Io { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    }
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn run_metadata(cfg: &RunConfig) -> Metadata {
    let mut m = Metadata::default();
    m.push("model", cfg.model.to_string());
    m.push("beta", fmt_f64(cfg.beta));
    m.push("lambda", fmt_f64(cfg.lambda));
    m.push("delta", cfg.probe.delta.to_string());
    m.push("h0", fmt_f64(cfg.probe.h0));
    m.push("two_s0", cfg.probe.s0.doubled().to_string());
    m
}

pub fn build_polynomial(cfg: &RunConfig) -> Result<PartitionPolynomial> {
    Ok(cfg.model.build(cfg.beta)?)
}

/// Zeros plus one `zeros.csv` row per root.
pub fn zeros_table(cfg: &RunConfig, zeros: &ZeroSet) -> ZerosTable {
    let mut meta = run_metadata(cfg);
    meta.push("circle_deviation", fmt_f64(zeros.circle_deviation));
    let rate = cfg.lambda * f64::from(cfg.probe.delta);
    let rows = zeros
        .roots
        .iter()
        .zip(&zeros.angles)
        .enumerate()
        .map(|(index, (z, &theta))| ZeroRow {
            index,
            re: z.re,
            im: z.im,
            theta,
            abs_minus_1: z.norm() - 1.0,
            multiplicity: zeros.multiplicity_of(index),
            predicted_time: zero_time(theta, rate),
        })
        .collect();
    ZerosTable { meta, rows }
}

pub fn series_table(cfg: &RunConfig, series: &TimeSeries) -> SeriesTable {
    let mut meta = run_metadata(cfg);
    meta.push(
        "state",
        match cfg.probe.state {
            StateConfig::SxMax => "sx_max",
            StateConfig::Amplitudes(_) => "amplitudes",
        },
    );
    meta.push("t_max", fmt_f64(cfg.t_max()));
    meta.push("steps", cfg.steps.to_string());
    let rows = series
        .times()
        .iter()
        .zip(series.values())
        .map(|(&t, f)| SeriesRow { t, re: f.re, im: f.im, abs: f.norm() })
        .collect();
    SeriesTable { meta, rows }
}

pub fn report(cfg: &RunConfig, zeros: &ZeroSet, c: &CorrelationReport) -> Report {
    Report {
        model: cfg.model.to_string(),
        beta: cfg.beta,
        lambda: cfg.lambda,
        delta: cfg.probe.delta,
        predicted: c.predicted.iter().map(|p| p.time).collect(),
        predicted_multiplicity: c.predicted.iter().map(|p| p.multiplicity).collect(),
        detected: c.detected.iter().map(|d| DetectedJson { t: d.time, residual: d.residual }).collect(),
        matches: c
            .matches
            .iter()
            .map(|m| MatchJson { predicted: m.predicted, detected: m.detected, deviation: m.deviation })
            .collect(),
        max_deviation: c.max_deviation,
        circle_deviation: zeros.circle_deviation,
        match_window: c.window,
        unmatched_predicted: c.unmatched_predicted.clone(),
        unmatched_detected: c.unmatched_detected.clone(),
        all_matched: c.all_predictions_matched(),
    }
}

pub fn evolve(cfg: &RunConfig, poly: &PartitionPolynomial) -> Result<TimeSeries> {
    let state = cfg.probe.state()?;
    Ok(expectation_series(poly, &state, cfg.lambda, cfg.probe.delta, cfg.probe.h0, cfg.t_max(), cfg.steps)?)
}

/// Writes `zeros.csv` and returns the zero set.
pub fn cmd_zeros(cfg: &RunConfig, out: &Path) -> Result<ZeroSet> {
    let poly = build_polynomial(cfg)?;
    let zeros = find_zeros(&poly)?;
    write_file(out, &zeros_table(cfg, &zeros).to_csv())?;
    Ok(zeros)
}

/// Writes `series.csv` and returns the sampled series.
pub fn cmd_evolve(cfg: &RunConfig, out: &Path) -> Result<TimeSeries> {
    let poly = build_polynomial(cfg)?;
    let series = evolve(cfg, &poly)?;
    write_file(out, &series_table(cfg, &series).to_csv())?;
    Ok(series)
}

fn load_series(cfg: &RunConfig, poly: &PartitionPolynomial, path: &Path) -> Result<TimeSeries> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let table = SeriesTable::parse(&text).map_err(|source| CliError::Format { path: path.to_path_buf(), source })?;
    for (key, want) in run_metadata(cfg).0 {
        match table.meta.get(&key) {
            Some(got) if got == want => {}
            Some(got) => {
                return Err(leeyang_core::Error::Domain(format!(
                    "series {key} `{got}` does not match config {key} `{want}`"
                ))
                .into())
            }
            None => return Err(leeyang_core::Error::Domain(format!("series file has no `{key}` metadata")).into()),
        }
    }
    let signal = ProbeSignal::new(poly, &cfg.probe.state()?, cfg.lambda, cfg.probe.delta, cfg.probe.h0)?;
    let times = table.rows.iter().map(|r| r.t).collect();
    let values = table.rows.iter().map(|r| Complex64::new(r.re, r.im)).collect();
    Ok(TimeSeries::from_parts(signal, times, values)?)
}

/// Writes `report.json`. Evolves the probe unless `series` names a
/// `series.csv` whose metadata matches `cfg`.
pub fn cmd_correlate(cfg: &RunConfig, out: &Path, series: Option<&Path>) -> Result<Report> {
    if cfg.probe.h0 != 0.0 {
        return Err(leeyang_core::Error::Domain("zero-time correlation requires probe.h0 = 0".into()).into());
    }
    let poly = build_polynomial(cfg)?;
    let zeros = find_zeros(&poly)?;
    let series = match series {
        Some(path) => load_series(cfg, &poly, path)?,
        None => evolve(cfg, &poly)?,
    };
    let predicted = predicted_zero_times(&zeros, cfg.lambda, cfg.probe.delta)?;
    let c = correlate_with(&predicted, &series, cfg.magnitude_tol, cfg.match_window)?;
    let r = report(cfg, &zeros, &c);
    write_file(out, &r.to_json())?;
    Ok(r)
}

#[derive(Debug, Clone)]
pub struct PanelOutcome {
    pub label: String,
    pub temperature: &'static str,
    pub dir: PathBuf,
    pub report: Report,
    pub zero_count: usize,
}

/// Writes `<out_dir>/<fig>/<panel>/{config.json, zeros.csv, series.csv, report.json}`.
pub fn cmd_reproduce(figure: Figure, out_dir: &Path) -> Result<Vec<PanelOutcome>> {
    let mut outcomes = Vec::with_capacity(4);
    for panel in figure.panels() {
        let cfg = panel.config()?;
        let dir = out_dir.join(figure.id()).join(panel.panel.to_string());
        write_file(&dir.join("config.json"), panel.json)?;
        let poly = build_polynomial(&cfg)?;
        let zeros = find_zeros(&poly)?;
        write_file(&dir.join("zeros.csv"), &zeros_table(&cfg, &zeros).to_csv())?;
        let series = evolve(&cfg, &poly)?;
        write_file(&dir.join("series.csv"), &series_table(&cfg, &series).to_csv())?;
        let predicted = predicted_zero_times(&zeros, cfg.lambda, cfg.probe.delta)?;
        let c = correlate_with(&predicted, &series, cfg.magnitude_tol, cfg.match_window)?;
        let report = report(&cfg, &zeros, &c);
        write_file(&dir.join("report.json"), &report.to_json())?;
        outcomes.push(PanelOutcome {
            label: panel.label(),
            temperature: panel.temperature,
            dir,
            report,
            zero_count: zeros.degree(),
        });
    }
    Ok(outcomes)
}
