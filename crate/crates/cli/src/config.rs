//! Run configuration: defaults, `key=value` files and command-line overrides.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use cobord_core::trace::AxiomSet;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: expected key=value, got '{text}'")]
    Syntax { line: usize, text: String },
    #[error("unknown config key '{0}'")]
    UnknownKey(String),
    #[error("bad value for {key}: {reason}")]
    Value { key: String, reason: String },
}

/// Inclusive degree range `LO..HI`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub const fn new(lo: i64, hi: i64) -> Self {
        Self { lo, hi }
    }

    pub fn pair(self) -> (i64, i64) {
        (self.lo, self.hi)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = s
            .trim()
            .split_once("..")
            .ok_or_else(|| format!("expected LO..HI, got '{s}'"))?;
        let lo: i64 = lo.trim().parse().map_err(|e| format!("{lo}: {e}"))?;
        let hi: i64 = hi.trim().parse().map_err(|e| format!("{hi}: {e}"))?;
        if lo > hi {
            return Err(format!("empty window {lo}..{hi}"));
        }
        Ok(Self { lo, hi })
    }
}

impl Serialize for Window {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Window {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}'")),
        }
    }
}

mod axiom_text {
    use super::*;

    pub fn serialize<S: Serializer>(a: &AxiomSet, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(a)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<AxiomSet, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Every parameter that affects a report. Serialized into each report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Number of `v_i` generators.
    pub k: usize,
    /// Truncation of the 2-series in powers of `c1`.
    pub series_bound: usize,
    /// Highest power shown by `fgl`.
    pub fgl_deg: usize,
    /// Skeleton index for `skeleton` and `tor`.
    pub skeleton_n: usize,
    pub skeleton_window: Window,
    pub tor_window: Window,
    pub ahss_window: Window,
    /// Degree bound for the mod-2 rings.
    pub steenrod_bound: u32,
    #[serde(with = "axiom_text")]
    pub axioms: AxiomSet,
    /// Largest free rank of `H^7` in the sweep.
    pub h7_max_rank: usize,
    /// Sign of the Euler class orientation.
    pub orientation: i64,
    pub seed: u64,
    pub random_modules: usize,
    pub random_elements: usize,
    pub format: Format,
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            k: cobord_core::DEFAULT_K,
            series_bound: 16,
            fgl_deg: 4,
            skeleton_n: 4,
            skeleton_window: Window::new(-30, 10),
            tor_window: Window::new(-20, 12),
            ahss_window: Window::new(-8, 8),
            steenrod_bound: 10,
            axioms: AxiomSet::ALL,
            h7_max_rank: 4,
            orientation: -1,
            seed: 20240601,
            random_modules: 5,
            random_elements: 100,
            format: Format::Text,
            timing: false,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e: T::Err| ConfigError::Value {
            key: key.into(),
            reason: e.to_string(),
        })
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "k" => self.k = parse_value(key, value)?,
            "series_bound" => self.series_bound = parse_value(key, value)?,
            "fgl_deg" => self.fgl_deg = parse_value(key, value)?,
            "skeleton_n" => self.skeleton_n = parse_value(key, value)?,
            "skeleton_window" => self.skeleton_window = parse_value(key, value)?,
            "tor_window" => self.tor_window = parse_value(key, value)?,
            "ahss_window" => self.ahss_window = parse_value(key, value)?,
            "steenrod_bound" => self.steenrod_bound = parse_value(key, value)?,
            "axioms" => self.axioms = parse_value(key, value)?,
            "h7_max_rank" => self.h7_max_rank = parse_value(key, value)?,
            "orientation" => self.orientation = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "random_modules" => self.random_modules = parse_value(key, value)?,
            "random_elements" => self.random_elements = parse_value(key, value)?,
            "format" => self.format = parse_value(key, value)?,
            "timing" => self.timing = parse_value(key, value)?,
            other => return Err(ConfigError::UnknownKey(other.into())),
        }
        Ok(())
    }

    /// Applies `key=value` lines; blank lines and `#` comments are skipped.
    /// On error `self` is left unchanged.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        let mut next = self.clone();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: idx + 1,
                text: raw.into(),
            })?;
            next.set(key.trim(), value)?;
        }
        next.validate()?;
        *self = next;
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    /// The file form, one line per field.
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        let mut out = String::new();
        if let serde_json::Value::Object(map) = value {
            for (k, v) in map {
                let v = match v {
                    serde_json::Value::String(s) => s,
                    other => other.to_string(),
                };
                out.push_str(&format!("{k}={v}\n"));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |key: &str, reason: &str| {
            Err(ConfigError::Value {
                key: key.into(),
                reason: reason.into(),
            })
        };
        if self.k == 0 {
            return bad("k", "need at least one generator");
        }
        if self.series_bound < 4 {
            return bad("series_bound", "must be at least 4");
        }
        if self.fgl_deg == 0 || self.fgl_deg > self.series_bound {
            return bad("fgl_deg", "must lie in 1..=series_bound");
        }
        if self.orientation != 1 && self.orientation != -1 {
            return bad("orientation", "must be 1 or -1");
        }
        if self.steenrod_bound < 10 {
            return bad("steenrod_bound", "must be at least 10");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let cfg = RunConfig {
            axioms: AxiomSet::NONE,
            tor_window: Window::new(-6, 4),
            ..RunConfig::default()
        };
        let mut back = RunConfig::default();
        back.apply_text(&cfg.to_text()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn errors() {
        let mut cfg = RunConfig::default();
        assert!(matches!(
            cfg.apply_text("k"),
            Err(ConfigError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            cfg.apply_text("colour=red"),
            Err(ConfigError::UnknownKey(_))
        ));
        assert!(cfg.apply_text("tor_window=3..1").is_err());
        assert!(cfg.apply_text("orientation=2").is_err());
        assert_eq!(cfg, RunConfig::default());
        cfg.apply_text("# comment\n\nseed = 9 # trailing\n")
            .unwrap();
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn windows() {
        assert_eq!("-20..12".parse::<Window>().unwrap(), Window::new(-20, 12));
        assert!("5".parse::<Window>().is_err());
    }
}
