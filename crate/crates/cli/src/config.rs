//! Source configuration files.
//!
//! A flat TOML table:
//!
//! ```toml
//! crystal_length_mm = 3.0        # optional, default 3 mm
//! d_g_fs_per_mm = 190.0          # required, non-zero
//! lambda_p_fs_per_mm = 40.0      # required unless kappa is given
//! sigma_p_rad_per_fs = 0.0196    # optional, default from a 120 fs pulse
//! # kappa = 1.2                  # alternative to lambda_p/sigma_p
//! ```

use std::fmt;
use std::path::Path;

use bellsim::source::{
    sigma_from_pulse_fwhm, PumpSpread, SourceParams, DEMO_CRYSTAL_LENGTH_MM, DEMO_PULSE_FWHM_FS,
};
use serde::Serialize;

const KEYS: [&str; 5] = [
    "crystal_length_mm",
    "d_g_fs_per_mm",
    "lambda_p_fs_per_mm",
    "sigma_p_rad_per_fs",
    "kappa",
];

/// A config problem anchored to a line of the source file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub origin: String,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.origin, self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Parameters as resolved from a config, including defaults that were filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedSource {
    pub params: SourceParams,
    pub kappa: f64,
    pub window_half_width_fs: f64,
    pub defaults_used: Vec<String>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn key_line(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|l| {
        let t = l.trim_start();
        t.strip_prefix(key)
            .map(|rest| rest.trim_start().starts_with('='))
            .unwrap_or(false)
    })
    .map(|i| i + 1)
}

pub fn parse_source(text: &str, origin: &str) -> Result<ResolvedSource, ConfigError> {
    let eof_line = text.lines().count().max(1);
    let err = |line: usize, message: String| ConfigError { origin: origin.to_string(), line, message };

    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
        let line = e.span().map(|s| line_of(text, s.start)).unwrap_or(1);
        err(line, e.message().trim().to_string())
    })?;

    for key in table.keys() {
        if !KEYS.contains(&key.as_str()) {
            let line = key_line(text, key).unwrap_or(1);
            return Err(err(line, format!("unknown key `{key}` (expected one of {})", KEYS.join(", "))));
        }
    }

    let number = |key: &str| -> Result<Option<f64>, ConfigError> {
        let line = key_line(text, key).unwrap_or(eof_line);
        match table.get(key) {
            None => Ok(None),
            Some(toml::Value::Float(x)) if x.is_finite() => Ok(Some(*x)),
            Some(toml::Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(other) => Err(err(line, format!("`{key}` must be a finite number, got {other}"))),
        }
    };

    let mut defaults_used = Vec::new();
    let length = match number("crystal_length_mm")? {
        Some(l) => l,
        None => {
            defaults_used.push(format!("crystal_length_mm = {DEMO_CRYSTAL_LENGTH_MM}"));
            DEMO_CRYSTAL_LENGTH_MM
        }
    };
    let d_g = number("d_g_fs_per_mm")?
        .ok_or_else(|| err(eof_line, "missing required key `d_g_fs_per_mm`".into()))?;
    if d_g == 0.0 {
        let line = key_line(text, "d_g_fs_per_mm").unwrap_or(eof_line);
        return Err(err(line, "degenerate dispersion: `d_g_fs_per_mm` must be non-zero".into()));
    }

    let kappa = number("kappa")?;
    let lambda_p = number("lambda_p_fs_per_mm")?;
    let sigma_p = number("sigma_p_rad_per_fs")?;
    let pump = match (kappa, lambda_p, sigma_p) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            let line = key_line(text, "kappa").unwrap_or(eof_line);
            return Err(err(
                line,
                "`kappa` conflicts with `lambda_p_fs_per_mm`/`sigma_p_rad_per_fs`; give one or the other".into(),
            ));
        }
        (Some(k), None, None) => PumpSpread::Kappa(k),
        (None, Some(lambda_p_fs_per_mm), sigma) => {
            let sigma_p_rad_per_fs = match sigma {
                Some(s) => s,
                None => {
                    let s = sigma_from_pulse_fwhm(DEMO_PULSE_FWHM_FS).expect("positive duration");
                    defaults_used.push(format!(
                        "sigma_p_rad_per_fs = {s} (transform-limited {DEMO_PULSE_FWHM_FS} fs pulse)"
                    ));
                    s
                }
            };
            PumpSpread::Bandwidth { lambda_p_fs_per_mm, sigma_p_rad_per_fs }
        }
        (None, None, _) => {
            return Err(err(eof_line, "missing required key `lambda_p_fs_per_mm` (or give `kappa`)".into()));
        }
    };

    let params = SourceParams::new(length, d_g, pump).map_err(|e| {
        let line = match e.to_string() {
            s if s.contains("crystal length") => key_line(text, "crystal_length_mm"),
            s if s.contains("sigma_p") => key_line(text, "sigma_p_rad_per_fs"),
            _ => None,
        };
        err(line.unwrap_or(1), e.to_string())
    })?;
    Ok(ResolvedSource {
        kappa: params.kappa(),
        window_half_width_fs: params.window_half_width_fs(),
        params,
        defaults_used,
    })
}

pub fn load_source(path: &Path) -> Result<ResolvedSource, ConfigError> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        origin: origin.clone(),
        line: 0,
        message: format!("cannot read config: {e}"),
    })?;
    parse_source(&text, &origin)
}
