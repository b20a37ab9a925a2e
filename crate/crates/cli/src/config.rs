//! Flag/file configuration resolution.
//!
//! Every numeric flag accepts scientific notation ("1e6"). A JSON config
//! file can supply any field; explicit flags always win. The output
//! directory falls back to the KFREE_OUT_DIR environment variable and
//! then to the current directory.

use std::path::{Path, PathBuf};

use kfree_core::character::QuadraticCharacter;
use kfree_core::error::{Error, Result};
use serde::Deserialize;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "KFREE_OUT_DIR";

/// Optional defaults loadable from a JSON file; flags take precedence.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub k: Option<u32>,
    pub character: Option<String>,
    pub bad_prime_sign: Option<i8>,
    pub n: Option<String>,
    pub x_max: Option<String>,
    pub x: Option<String>,
    pub y: Option<String>,
    pub t: Option<String>,
    pub limit: Option<String>,
    pub sigma: Option<f64>,
    pub sigma0: Option<f64>,
    pub beta: Option<f64>,
    pub epsilon_slack: Option<f64>,
    pub window_fraction: Option<f64>,
    pub abs_err: Option<f64>,
    pub max_t: Option<f64>,
    pub step: Option<f64>,
    pub which: Option<String>,
    pub s: Option<Vec<String>>,
    pub y_list: Option<String>,
    pub t_list: Option<String>,
    pub out: Option<String>,
    pub out_dir: Option<String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(FileConfig::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    Error::InvalidArgument(format!("cannot read config {}: {e}", p.display()))
                })?;
                serde_json::from_str(&text)
                    .map_err(|e| Error::InvalidArgument(format!("bad config {}: {e}", p.display())))
            }
        }
    }
}

/// Parse a count that may be written in scientific notation ("1e6").
pub fn parse_count(text: &str) -> Result<u64> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("'{text}' is not a number")))?;
    if !v.is_finite() || !(1.0..=9.0e15).contains(&v) {
        return Err(Error::InvalidArgument(format!(
            "'{text}' is outside the supported integer range"
        )));
    }
    if v.fract() != 0.0 {
        return Err(Error::InvalidArgument(format!(
            "'{text}' is not an integer"
        )));
    }
    Ok(v as u64)
}

pub fn parse_real(text: &str) -> Result<f64> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("'{text}' is not a number")))?;
    if !v.is_finite() {
        return Err(Error::InvalidArgument(format!("'{text}' is not finite")));
    }
    Ok(v)
}

/// "a+bi" / "a-bi" / "a" → a complex point.
pub fn parse_complex(text: &str) -> Result<kfree_core::C64> {
    let t = text.trim().trim_end_matches('i');
    let body = t.strip_prefix('+').unwrap_or(t);
    // split at the sign of the imaginary part, skipping a leading sign
    // and exponent signs like 1e-3
    let bytes = body.as_bytes();
    let mut split = None;
    for i in 1..bytes.len() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
            split = Some(i);
        }
    }
    match split {
        None => Ok(kfree_core::C64::new(parse_real(body)?, 0.0)),
        Some(i) => {
            let re = parse_real(&body[..i])?;
            let im = parse_real(&body[i..])?;
            Ok(kfree_core::C64::new(re, im))
        }
    }
}

/// Comma-separated counts, ascending.
pub fn parse_count_list(text: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        out.push(parse_count(part)?);
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument("empty list".into()));
    }
    Ok(out)
}

pub fn parse_real_list(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        out.push(parse_real(part)?);
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument("empty list".into()));
    }
    Ok(out)
}

/// Character source: a fundamental discriminant or a JSON table file.
#[derive(Debug, Clone)]
pub enum CharacterSpec {
    Discriminant(i64),
    Table(PathBuf),
}

impl CharacterSpec {
    /// Accepts "d=<int>" or "table=<path>".
    pub fn parse(text: &str) -> Result<Self> {
        if let Some(d) = text.strip_prefix("d=") {
            let d: i64 = d
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad discriminant in '{text}'")))?;
            Ok(CharacterSpec::Discriminant(d))
        } else if let Some(p) = text.strip_prefix("table=") {
            Ok(CharacterSpec::Table(PathBuf::from(p)))
        } else {
            Err(Error::InvalidArgument(format!(
                "character spec '{text}' must be d=<int> or table=<path>"
            )))
        }
    }

    pub fn build(&self) -> Result<QuadraticCharacter> {
        match self {
            CharacterSpec::Discriminant(d) => QuadraticCharacter::from_discriminant(*d),
            CharacterSpec::Table(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::InvalidArgument(format!(
                        "cannot read character table {}: {e}",
                        path.display()
                    ))
                })?;
                let values: Vec<i8> = serde_json::from_str(&text).map_err(|e| {
                    Error::InvalidArgument(format!(
                        "character table {} must be a JSON list of -1/0/1: {e}",
                        path.display()
                    ))
                })?;
                QuadraticCharacter::from_values(values.len() as u64, values)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CharacterSpec::Discriminant(d) => format!("d={d}"),
            CharacterSpec::Table(p) => format!("table={}", p.display()),
        }
    }
}
