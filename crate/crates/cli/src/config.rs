//! Flat key=value configuration files.
//!
//! One assignment per line, `#` starts a comment, blank lines are ignored.
//! Keys match the [`PipelineConfig`] field names:
//!
//! ```text
//! n_filters = 30
//! f_min = 130
//! f_max = 6800
//! frame_duration = 32      # milliseconds
//! hop = half               # or paper-literal
//! window = standard        # or paper-literal
//! log_floor = 1e-10
//! alpha = 2
//! fill_decay = 0.95
//! ```
//!
//! Unset keys keep their defaults; unknown keys are errors so typos cannot
//! silently fall back to defaults.

use std::path::Path;

use submel_core::{Error, HopKind, PipelineConfig, Result, WindowKind};

fn bad_value(field: &'static str, value: &str) -> Error {
    Error::InvalidConfig {
        field,
        message: format!("cannot parse {value:?}"),
    }
}

fn parse_usize(field: &'static str, value: &str) -> Result<usize> {
    value.parse().map_err(|_| bad_value(field, value))
}

fn parse_f64(field: &'static str, value: &str) -> Result<f64> {
    value.parse().map_err(|_| bad_value(field, value))
}

pub fn parse_window(value: &str) -> Result<WindowKind> {
    match value {
        "standard" => Ok(WindowKind::Standard),
        "paper-literal" => Ok(WindowKind::PaperLiteral),
        _ => Err(bad_value("window", value)),
    }
}

pub fn parse_hop(value: &str) -> Result<HopKind> {
    match value {
        "half" => Ok(HopKind::Half),
        "paper-literal" => Ok(HopKind::PaperLiteral),
        _ => Err(bad_value("hop", value)),
    }
}

/// Apply one `key = value` assignment to `config`.
fn apply(config: &mut PipelineConfig, key: &str, value: &str) -> Result<()> {
    match key {
        "n_filters" => config.n_filters = parse_usize("n_filters", value)?,
        "f_min" => config.f_min_hz = parse_f64("f_min", value)?,
        "f_max" => config.f_max_hz = parse_f64("f_max", value)?,
        "frame_duration" => config.frame_duration_ms = parse_f64("frame_duration", value)?,
        "hop" => config.hop = parse_hop(value)?,
        "window" => config.window = parse_window(value)?,
        "log_floor" => config.log_floor = parse_f64("log_floor", value)?,
        "alpha" => config.alpha = parse_usize("alpha", value)?,
        "fill_decay" => config.fill_decay = parse_f64("fill_decay", value)?,
        _ => {
            return Err(Error::InvalidConfig {
                field: "config",
                message: format!("unknown key {key:?}"),
            })
        }
    }
    Ok(())
}

/// Parse a config file's text on top of the defaults.
pub fn parse_config(text: &str) -> Result<PipelineConfig> {
    let mut config = PipelineConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::InvalidConfig {
                field: "config",
                message: format!("line {}: expected key = value, got {raw:?}", lineno + 1),
            });
        };
        apply(&mut config, key.trim(), value.trim())?;
    }
    config.validate()?;
    Ok(config)
}

/// Load a config file, or the defaults when `path` is `None`.
pub fn load_config(path: Option<&Path>) -> Result<PipelineConfig> {
    match path {
        None => Ok(PipelineConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| {
                if source.kind() == std::io::ErrorKind::NotFound {
                    Error::FileNotFound(p.to_path_buf())
                } else {
                    Error::Io {
                        path: p.to_path_buf(),
                        source,
                    }
                }
            })?;
            parse_config(&text)
        }
    }
}
