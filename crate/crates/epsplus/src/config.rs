//! Run configuration as `key = value` lines.
//!
//! ```text
//! # energy units and metres
//! capacity = 320
//! travel_rate = 0.5
//! coverage_rate = 1.0   # optional, twice the travel rate by default
//! sensor_range = 5
//! depth = auto          # or a level count
//! cell_size = 1
//! ```

use epsplus_core::MissionConfig;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("line {line}: `{key}` must be a positive number, got `{value}`")]
    BadValue {
        line: usize,
        key: String,
        value: String,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mission: MissionConfig,
    /// Metres per cell side.
    pub cell_size: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mission: MissionConfig::default(),
            cell_size: 1.0,
        }
    }
}

const KEYS: [&str; 6] = [
    "capacity",
    "travel_rate",
    "coverage_rate",
    "sensor_range",
    "depth",
    "cell_size",
];

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut seen: Vec<&str> = Vec::new();
    let mut coverage = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or(ConfigError::Syntax { line })?;
        let (key, value) = (key.trim(), value.trim());
        let Some(&key) = KEYS.iter().find(|&&k| k == key) else {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            });
        };
        if seen.contains(&key) {
            return Err(ConfigError::Duplicate {
                line,
                key: key.to_string(),
            });
        }
        seen.push(key);
        let bad = || ConfigError::BadValue {
            line,
            key: key.to_string(),
            value: value.to_string(),
        };
        if key == "depth" {
            cfg.mission.depth = match value {
                "auto" => None,
                v => Some(v.parse::<usize>().ok().filter(|&k| k > 0).ok_or_else(bad)?),
            };
            continue;
        }
        let number = value
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite() && *v > 0.0)
            .ok_or_else(bad)?;
        match key {
            "capacity" => cfg.mission.capacity = number,
            "travel_rate" => cfg.mission.travel_rate = number,
            "coverage_rate" => coverage = Some(number),
            "sensor_range" => cfg.mission.sensor_range = number,
            "cell_size" => cfg.cell_size = number,
            _ => unreachable!("key list and match arms agree"),
        }
    }
    cfg.mission.coverage_rate = coverage.unwrap_or(2.0 * cfg.mission.travel_rate);
    Ok(cfg)
}
