//! Plain `key = value` run files. Lines are kept verbatim so that a parsed
//! file serialises back to the same bytes.

use std::fmt;

pub const KEYS: &[&str] = &[
    "geometry",
    "radius",
    "potential",
    "k",
    "no-monopole",
    "j",
    "alpha",
    "k-osc",
    "mass",
    "n",
    "channel",
    "include-inadmissible",
    "units",
    "format",
    "output",
    "grid",
    "energy",
    "suite",
    "report",
];

/// Prefix of tolerance overrides, e.g. `tolerance.fd_rel = 1e-5`.
pub const TOLERANCE_PREFIX: &str = "tolerance.";

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Line {
    /// Blank or `#` comment.
    Other(String),
    Entry { key: String, value: String, raw: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunConfig {
    lines: Vec<Line>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut lines = Vec::new();
        for (no, raw) in text.split('\n').enumerate() {
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                lines.push(Line::Other(raw.to_string()));
                continue;
            }
            let (k, v) = t
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("line {}: expected 'key = value', got '{t}'", no + 1)))?;
            let key = k.trim().to_string();
            if !KEYS.contains(&key.as_str()) && !key.starts_with(TOLERANCE_PREFIX) {
                return Err(ConfigError(format!("line {}: unknown key '{key}'", no + 1)));
            }
            let dup = lines.iter().any(|l| matches!(l, Line::Entry { key: k, .. } if *k == key));
            if dup {
                return Err(ConfigError(format!("line {}: duplicate key '{key}'", no + 1)));
            }
            lines.push(Line::Entry {
                key,
                value: v.trim().to_string(),
                raw: raw.to_string(),
            });
        }
        Ok(RunConfig { lines })
    }

    pub fn serialize(&self) -> String {
        self.lines
            .iter()
            .map(|l| match l {
                Line::Other(s) => s.as_str(),
                Line::Entry { raw, .. } => raw.as_str(),
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find_map(|l| match l {
            Line::Entry { key: k, value, .. } if k == key => Some(value.as_str()),
            _ => None,
        })
    }

    /// `(name, value)` for every `tolerance.*` entry, in file order.
    pub fn tolerances(&self) -> Vec<(&str, &str)> {
        self.lines
            .iter()
            .filter_map(|l| match l {
                Line::Entry { key, value, .. } => key
                    .strip_prefix(TOLERANCE_PREFIX)
                    .map(|name| (name, value.as_str())),
                _ => None,
            })
            .collect()
    }
}
