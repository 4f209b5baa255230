//! Merging of flags, the config file and defaults.

use std::path::Path;

use rigid_core::{IntegratorSettings, RawParams};

use crate::args::{Common, Format};
use crate::CliError;

/// Every option after resolution.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub params: RawParams,
    pub settings: IntegratorSettings,
    pub r_max: f64,
    pub grid_n: usize,
    pub t_max: Option<f64>,
    pub format: Format,
    pub jobs: usize,
    pub seed: u64,
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::Input(format!("invalid value for {key}: {v:?}")))
}

fn format_from(v: &str) -> Result<Format, CliError> {
    match v {
        "human" => Ok(Format::Human),
        "csv" => Ok(Format::Csv),
        "json-lines" => Ok(Format::JsonLines),
        "svg" => Ok(Format::Svg),
        _ => Err(CliError::Input(format!("unknown format {v:?}"))),
    }
}

/// Parses `key = value` lines into `c`, leaving already set fields alone.
pub fn apply_config_text(text: &str, c: &mut Common) -> Result<(), CliError> {
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Input(format!("config line {}: expected key = value", n + 1)));
        };
        let (k, v) = (k.trim(), v.trim());
        macro_rules! set {
            ($field:ident) => {
                if c.$field.is_none() {
                    c.$field = Some(parse(k, v)?);
                }
            };
        }
        match k.replace('-', "_").as_str() {
            "b1" => set!(b1),
            "b2" => set!(b2),
            "a1" => set!(a1),
            "a2" => set!(a2),
            "a3" => set!(a3),
            "a4" => set!(a4),
            "rel_tol" => set!(rel_tol),
            "abs_tol" => set!(abs_tol),
            "r_max" => set!(r_max),
            "grid_n" => set!(grid_n),
            "t_max" => set!(t_max),
            "jobs" => set!(jobs),
            "seed" => set!(seed),
            "format" => {
                if c.format.is_none() {
                    c.format = Some(format_from(v)?);
                }
            }
            _ => return Err(CliError::Input(format!("config line {}: unknown key {k:?}", n + 1))),
        }
    }
    Ok(())
}

fn read_config(path: &Path, c: &mut Common) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    apply_config_text(&text, c)
}

pub fn resolve(common: &Common) -> Result<Resolved, CliError> {
    let mut c = common.clone();
    if let Some(path) = &common.config {
        read_config(path, &mut c)?;
    }
    let params = RawParams::new(
        c.b1.unwrap_or(0.0),
        c.b2.unwrap_or(0.0),
        c.a1.unwrap_or(0.0),
        c.a2.unwrap_or(0.0),
        c.a3.unwrap_or(0.0),
        c.a4.unwrap_or(0.0),
    )
    .map_err(|e| CliError::Input(e.to_string()))?;
    let mut settings = IntegratorSettings::default();
    if let Some(v) = c.rel_tol {
        settings.rel_tol = v;
    }
    if let Some(v) = c.abs_tol {
        settings.abs_tol = v;
    }
    settings.validate().map_err(|e| CliError::Input(e.to_string()))?;
    let r_max = c.r_max.unwrap_or(5.0);
    let grid_n = c.grid_n.unwrap_or(256);
    if let Some(t) = c.t_max {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Input(format!("t_max must be positive, got {t}")));
        }
    }
    let jobs = c
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(CliError::Input("jobs must be at least 1".into()));
    }
    Ok(Resolved {
        params,
        settings,
        r_max,
        grid_n,
        t_max: c.t_max,
        format: c.format.unwrap_or(Format::Human),
        jobs,
        seed: c.seed.unwrap_or(0),
    })
}
