//! File formats: `zeros.csv`, `series.csv` and `report.json`.
//!
//! CSV numbers are written with 17 significant digits so every value parses
//! back to the same bits. Lines starting with `#` carry `key: value` metadata.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const ZEROS_HEADER: &str = "index,re,im,theta,abs_minus_1,multiplicity,predicted_time";
pub const SERIES_HEADER: &str = "t,re,im,abs";

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn format_error<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { line, message: message.into() })
}

/// `x` with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Ordered `key: value` pairs written as `# key: value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Metadata(pub Vec<(String, String)>);

impl Metadata {
    pub fn push(&mut self, key: &str, value: impl Into<String>) {
        self.0.push((key.to_string(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn write(&self, out: &mut String) {
        for (k, v) in &self.0 {
            let _ = writeln!(out, "# {k}: {v}");
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroRow {
    pub index: usize,
    pub re: f64,
    pub im: f64,
    pub theta: f64,
    pub abs_minus_1: f64,
    pub multiplicity: usize,
    pub predicted_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZerosTable {
    pub meta: Metadata,
    pub rows: Vec<ZeroRow>,
}

impl ZerosTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        self.meta.write(&mut out);
        out.push_str(ZEROS_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.index,
                fmt_f64(r.re),
                fmt_f64(r.im),
                fmt_f64(r.theta),
                fmt_f64(r.abs_minus_1),
                r.multiplicity,
                fmt_f64(r.predicted_time)
            );
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let (meta, body) = split_csv(text, ZEROS_HEADER)?;
        let mut rows = Vec::with_capacity(body.len());
        for (line, fields) in body {
            let [index, re, im, theta, abs_minus_1, multiplicity, predicted_time] = fixed::<7>(line, &fields)?;
            rows.push(ZeroRow {
                index: parse_field(line, "index", index)?,
                re: parse_field(line, "re", re)?,
                im: parse_field(line, "im", im)?,
                theta: parse_field(line, "theta", theta)?,
                abs_minus_1: parse_field(line, "abs_minus_1", abs_minus_1)?,
                multiplicity: parse_field(line, "multiplicity", multiplicity)?,
                predicted_time: parse_field(line, "predicted_time", predicted_time)?,
            });
        }
        Ok(ZerosTable { meta, rows })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTable {
    pub meta: Metadata,
    pub rows: Vec<SeriesRow>,
}

impl SeriesTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(96 * (self.rows.len() + 8));
        self.meta.write(&mut out);
        out.push_str(SERIES_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{}", fmt_f64(r.t), fmt_f64(r.re), fmt_f64(r.im), fmt_f64(r.abs));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let (meta, body) = split_csv(text, SERIES_HEADER)?;
        let mut rows = Vec::with_capacity(body.len());
        for (line, fields) in body {
            let [t, re, im, abs] = fixed::<4>(line, &fields)?;
            rows.push(SeriesRow {
                t: parse_field(line, "t", t)?,
                re: parse_field(line, "re", re)?,
                im: parse_field(line, "im", im)?,
                abs: parse_field(line, "abs", abs)?,
            });
        }
        Ok(SeriesTable { meta, rows })
    }
}

type Body<'a> = Vec<(usize, Vec<&'a str>)>;

fn split_csv<'a>(text: &'a str, header: &str) -> Result<(Metadata, Body<'a>), FormatError> {
    let mut meta = Metadata::default();
    let mut seen_header = false;
    let mut body = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if let Some(comment) = raw.strip_prefix('#') {
            let Some((k, v)) = comment.split_once(':') else {
                return format_error(line, "metadata line is not `# key: value`");
            };
            meta.push(k.trim(), v.trim());
        } else if raw.trim().is_empty() {
            continue;
        } else if !seen_header {
            if raw.trim() != header {
                return format_error(line, format!("expected header `{header}`"));
            }
            seen_header = true;
        } else {
            body.push((line, raw.split(',').map(str::trim).collect()));
        }
    }
    if !seen_header {
        return format_error(text.lines().count().max(1), format!("missing header `{header}`"));
    }
    Ok((meta, body))
}

fn fixed<'a, const N: usize>(line: usize, fields: &[&'a str]) -> Result<[&'a str; N], FormatError> {
    match <[&str; N]>::try_from(fields) {
        Ok(a) => Ok(a),
        Err(_) => format_error(line, format!("expected {N} fields, found {}", fields.len())),
    }
}

fn parse_field<T: std::str::FromStr>(line: usize, name: &str, s: &str) -> Result<T, FormatError> {
    s.parse().or_else(|_| format_error(line, format!("bad {name} value `{s}`")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectedJson {
    pub t: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchJson {
    pub predicted: f64,
    pub detected: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictedJson {
    pub t: f64,
    pub multiplicity: usize,
}

/// Contents of `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub model: String,
    pub beta: f64,
    pub lambda: f64,
    pub delta: u32,
    /// Distinct predicted times, coincident roots merged.
    pub predicted: Vec<f64>,
    pub predicted_multiplicity: Vec<usize>,
    pub detected: Vec<DetectedJson>,
    pub matches: Vec<MatchJson>,
    pub max_deviation: Option<f64>,
    pub circle_deviation: f64,
    pub match_window: f64,
    pub unmatched_predicted: Vec<f64>,
    pub unmatched_detected: Vec<f64>,
    pub all_matched: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-2.0), "-2.0000000000000000e0");
        for x in [0.1, -0.0, 1e-300, f64::MAX, f64::MIN_POSITIVE, std::f64::consts::PI] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn series_rejects_bad_input() {
        assert_eq!(SeriesTable::parse("# a: b\n").unwrap_err().line, 1);
        let e = SeriesTable::parse("t,re,im,abs\n1,2,3\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = SeriesTable::parse("t,re,im,abs\n1,2,x,4\n").unwrap_err();
        assert!(e.message.contains("im"));
        assert!(SeriesTable::parse("#nocolon\nt,re,im,abs\n").is_err());
    }

    #[test]
    fn metadata_keeps_order() {
        let text = "# model: ring\n# beta: 1\nt,re,im,abs\n0,1,0,1\n";
        let t = SeriesTable::parse(text).unwrap();
        assert_eq!(t.meta.get("beta"), Some("1"));
        assert_eq!(t.meta.0[0].0, "model");
        assert_eq!(t.rows.len(), 1);
    }
}
