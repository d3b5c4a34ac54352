//! Flat key=value experiment configuration with mandatory unit suffixes on
//! dimensioned keys.
//!
//! ```text
//! sequence = truncate_then_rr
//! depth = 2.8 mK
//! t = 33 uK
//! dt_grid = linspace(0 us, 40 us, 21)
//! u_min_grid = logspace(0.4 uK, 2800 uK, 16)
//! n_sequences = 100
//! scale = 0.95
//! seed = 42
//! ```
//!
//! Depths are written in temperature units (U/kB) and stored in joules.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::constants::KB;
use crate::trap::{potential_at_depth, TrapConfig, TrapError, TrapPotential};

#[derive(Error, Debug)]
pub enum ConfigError {
    #[error("line {0}: expected `key = value`")]
    BadLine(usize),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{key}`: missing unit suffix on dimensioned value `{value}` (expected one of {expected})")]
    MissingUnit {
        key: String,
        value: String,
        expected: String,
    },
    #[error("key `{key}`: cannot parse `{value}`: {reason}")]
    BadValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Trap(#[from] TrapError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sequence {
    ReleaseRecapture,
    Spectroscopy,
    TruncateThenRr,
    AdiabaticRr,
}

impl Sequence {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "release_recapture" => Some(Self::ReleaseRecapture),
            "spectroscopy" => Some(Self::Spectroscopy),
            "truncate_then_rr" => Some(Self::TruncateThenRr),
            "adiabatic_rr" => Some(Self::AdiabaticRr),
            _ => None,
        }
    }
}

#[derive(Clone, Copy)]
enum Kind {
    Time,
    Length,
    Temperature,
    /// Temperature units, stored as an energy in joules (U/kB convention).
    Depth,
}

impl Kind {
    fn units(self) -> &'static [(&'static str, f64)] {
        match self {
            Kind::Time => &[("s", 1.0), ("ms", 1e-3), ("us", 1e-6), ("ns", 1e-9)],
            Kind::Length => &[("m", 1.0), ("mm", 1e-3), ("um", 1e-6), ("nm", 1e-9)],
            Kind::Temperature => &[("K", 1.0), ("mK", 1e-3), ("uK", 1e-6), ("nK", 1e-9)],
            Kind::Depth => &[("K", KB), ("mK", 1e-3 * KB), ("uK", 1e-6 * KB), ("nK", 1e-9 * KB)],
        }
    }

    fn expected(self) -> String {
        self.units()
            .iter()
            .map(|(u, _)| *u)
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn parse_quantity(key: &str, raw: &str, kind: Kind) -> Result<f64, ConfigError> {
    let raw = raw.trim();
    let mut parts = raw.split_whitespace();
    let number = parts.next().unwrap_or("");
    let unit = parts.next();
    if parts.next().is_some() {
        return Err(ConfigError::BadValue {
            key: key.into(),
            value: raw.into(),
            reason: "expected `<number> <unit>`".into(),
        });
    }
    let value: f64 = number.parse().map_err(|_| ConfigError::BadValue {
        key: key.into(),
        value: raw.into(),
        reason: "not a number".into(),
    })?;
    let Some(unit) = unit else {
        return Err(ConfigError::MissingUnit {
            key: key.into(),
            value: raw.into(),
            expected: kind.expected(),
        });
    };
    for &(name, factor) in kind.units() {
        if unit == name {
            return Ok(value * factor);
        }
    }
    Err(ConfigError::BadValue {
        key: key.into(),
        value: raw.into(),
        reason: format!("unknown unit `{unit}` (expected one of {})", kind.expected()),
    })
}

/// `linspace(a, b, n)`, `logspace(a, b, n)` or `list(v1, v2, ...)` of
/// dimensioned quantities.
fn parse_grid(key: &str, raw: &str, kind: Kind) -> Result<Vec<f64>, ConfigError> {
    let raw = raw.trim();
    let bad = |reason: &str| ConfigError::BadValue {
        key: key.into(),
        value: raw.into(),
        reason: reason.into(),
    };
    let open = raw.find('(').ok_or_else(|| bad("expected linspace(...), logspace(...) or list(...)"))?;
    if !raw.ends_with(')') {
        return Err(bad("missing closing parenthesis"));
    }
    let func = &raw[..open];
    let args: Vec<&str> = raw[open + 1..raw.len() - 1].split(',').map(str::trim).collect();
    match func {
        "linspace" | "logspace" => {
            if args.len() != 3 {
                return Err(bad("expected three arguments: start, stop, count"));
            }
            let a = parse_quantity(key, args[0], kind)?;
            let b = parse_quantity(key, args[1], kind)?;
            let n: usize = args[2].parse().map_err(|_| bad("count must be an integer"))?;
            if n == 0 {
                return Err(bad("count must be >= 1"));
            }
            Ok(if func == "linspace" {
                crate::numeric::linspace(a, b, n)
            } else {
                if a <= 0.0 || b <= 0.0 {
                    return Err(bad("logspace endpoints must be positive"));
                }
                crate::numeric::logspace(a, b, n)
            })
        }
        "list" => args
            .iter()
            .map(|arg| parse_quantity(key, arg, kind))
            .collect(),
        _ => Err(bad("expected linspace(...), logspace(...) or list(...)")),
    }
}

/// Resolved experiment configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub sequence: Sequence,
    /// Peak trap depth U0, J.
    pub depth: f64,
    /// Ensemble temperature (initial temperature for sweeps), K.
    pub temperature: f64,
    pub waist: f64,
    pub wavelength: f64,
    /// Release-time grid, s.
    pub dt_grid: Vec<f64>,
    /// Minimum-depth grid for sweeps, J.
    pub u_min_grid: Vec<f64>,
    pub n_sequences: u64,
    pub n_trajectories: u64,
    pub n_bins: u32,
    pub scale: f64,
    pub seed: u64,
    /// Hold time at the minimum depth, s.
    pub hold: f64,
    /// SHA-256 of the resolved key=value map, hex.
    pub sha256: String,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let mut cfg = Self {
            sequence: Sequence::ReleaseRecapture,
            depth: 2.8e-3 * KB,
            temperature: 168e-6,
            waist: 1.03e-6,
            wavelength: 850e-9,
            dt_grid: crate::numeric::linspace(0.0, 40e-6, 21),
            u_min_grid: crate::numeric::logspace(0.4e-6 * KB, 2800e-6 * KB, 16),
            n_sequences: 100,
            n_trajectories: 10_000,
            n_bins: 10,
            scale: 0.95,
            seed: 42,
            hold: 20e-3,
            sha256: String::new(),
        };
        cfg.sha256 = cfg.digest();
        cfg
    }
}

impl ExperimentConfig {
    /// Parse config text, then apply `key=value` override strings in order.
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (idx, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::BadLine(idx + 1))?;
            cfg.apply(key.trim(), value.trim())?;
        }
        for entry in overrides {
            let (key, value) = entry
                .split_once('=')
                .ok_or_else(|| ConfigError::Invalid(format!("override `{entry}` is not key=value")))?;
            cfg.apply(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        cfg.sha256 = cfg.digest();
        Ok(cfg)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let int = |v: &str| -> Result<u64, ConfigError> {
            v.parse().map_err(|_| ConfigError::BadValue {
                key: key.into(),
                value: v.into(),
                reason: "expected a non-negative integer".into(),
            })
        };
        let float = |v: &str| -> Result<f64, ConfigError> {
            v.parse().map_err(|_| ConfigError::BadValue {
                key: key.into(),
                value: v.into(),
                reason: "expected a number".into(),
            })
        };
        match key {
            "sequence" => {
                self.sequence = Sequence::parse(value).ok_or_else(|| ConfigError::BadValue {
                    key: key.into(),
                    value: value.into(),
                    reason: "expected release_recapture, spectroscopy, truncate_then_rr or adiabatic_rr"
                        .into(),
                })?;
            }
            "depth" => self.depth = parse_quantity(key, value, Kind::Depth)?,
            "t" => self.temperature = parse_quantity(key, value, Kind::Temperature)?,
            "waist" => self.waist = parse_quantity(key, value, Kind::Length)?,
            "wavelength" => self.wavelength = parse_quantity(key, value, Kind::Length)?,
            "hold" => self.hold = parse_quantity(key, value, Kind::Time)?,
            "dt_grid" => self.dt_grid = parse_grid(key, value, Kind::Time)?,
            "u_min_grid" => self.u_min_grid = parse_grid(key, value, Kind::Depth)?,
            "n_sequences" => self.n_sequences = int(value)?,
            "n_trajectories" => self.n_trajectories = int(value)?,
            "n_bins" => self.n_bins = int(value)? as u32,
            "scale" => self.scale = float(value)?,
            "seed" => self.seed = int(value)?,
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_sequences < 1 {
            return Err(ConfigError::Invalid("n_sequences must be >= 1".into()));
        }
        if self.n_trajectories < 1 {
            return Err(ConfigError::Invalid("n_trajectories must be >= 1".into()));
        }
        if self.n_bins < 1 {
            return Err(ConfigError::Invalid("n_bins must be >= 1".into()));
        }
        if !(self.scale > 0.0 && self.scale <= 1.0) {
            return Err(ConfigError::Invalid("scale must be in (0, 1]".into()));
        }
        if self.dt_grid.is_empty() || self.dt_grid.windows(2).any(|p| p[1] <= p[0]) {
            return Err(ConfigError::Invalid(
                "dt_grid must be non-empty and strictly increasing".into(),
            ));
        }
        if self.u_min_grid.is_empty() || self.u_min_grid.windows(2).any(|p| p[1] <= p[0]) {
            return Err(ConfigError::Invalid(
                "u_min_grid must be non-empty and strictly increasing".into(),
            ));
        }
        if !(self.temperature > 0.0) {
            return Err(ConfigError::Invalid("t must be positive".into()));
        }
        Ok(())
    }

    /// Trap at the configured depth.
    pub fn build_trap(&self) -> Result<(TrapConfig, TrapPotential), ConfigError> {
        let base = TrapConfig {
            waist: self.waist,
            wavelength: self.wavelength,
            ..TrapConfig::rb87()
        };
        Ok(potential_at_depth(&base, self.depth)?)
    }

    /// Canonical key=value rendering of the resolved config (used for the
    /// reproducibility hash; excludes the hash itself).
    pub fn canonical(&self) -> String {
        let mut map = BTreeMap::new();
        map.insert("sequence", format!("{:?}", self.sequence));
        map.insert("depth_J", format!("{:e}", self.depth));
        map.insert("t_K", format!("{:e}", self.temperature));
        map.insert("waist_m", format!("{:e}", self.waist));
        map.insert("wavelength_m", format!("{:e}", self.wavelength));
        map.insert("hold_s", format!("{:e}", self.hold));
        map.insert("dt_grid_s", join_e(&self.dt_grid));
        map.insert("u_min_grid_J", join_e(&self.u_min_grid));
        map.insert("n_sequences", self.n_sequences.to_string());
        map.insert("n_trajectories", self.n_trajectories.to_string());
        map.insert("n_bins", self.n_bins.to_string());
        map.insert("scale", format!("{:e}", self.scale));
        map.insert("seed", self.seed.to_string());
        map.iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.canonical().as_bytes());
        let out = hasher.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn join_e(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:e}"))
        .collect::<Vec<_>>()
        .join(",")
}
