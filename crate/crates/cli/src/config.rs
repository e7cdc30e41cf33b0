//! Flat `key = value` experiment configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use sha2::{Digest, Sha256};

/// Keys accepted in a configuration file.
pub const KNOWN_KEYS: &[&str] = &[
    "n",
    "m",
    "seed",
    "out_dir",
    "grid_x_count",
    "grid_x_spacing",
    "grid_z_count",
    "grid_z_spacing",
    "nodes_per_panel",
    "tail_tol",
    "refinement",
    "tol_distance",
    "tol_semigroup",
    "tol_dominance",
    "tol_fit",
    "samples",
];

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Syntax { line: usize, text: String },
    UnknownKey { line: usize, key: String },
    Duplicate { line: usize, key: String },
    BadValue { key: String, value: String },
    NonPositiveTolerance { key: String },
    MissingSeed,
    Io(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Syntax { line, text } => write!(f, "line {line}: expected `key = value`, got {text:?}"),
            Self::UnknownKey { line, key } => write!(f, "line {line}: unknown key {key:?}"),
            Self::Duplicate { line, key } => write!(f, "line {line}: duplicate key {key:?}"),
            Self::BadValue { key, value } => write!(f, "key {key:?}: cannot parse {value:?}"),
            Self::NonPositiveTolerance { key } => write!(f, "key {key:?}: tolerances must be positive"),
            Self::MissingSeed => write!(f, "a seed is required for sampled experiments"),
            Self::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentConfig {
    entries: BTreeMap<String, String>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { line: i + 1, text: raw.to_string() })?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() {
                return Err(ConfigError::Syntax { line: i + 1, text: raw.to_string() });
            }
            if !KNOWN_KEYS.contains(&k) {
                return Err(ConfigError::UnknownKey { line: i + 1, key: k.to_string() });
            }
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(ConfigError::Duplicate { line: i + 1, key: k.to_string() });
            }
        }
        let cfg = Self { entries };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        for (k, _) in self.entries.iter() {
            match k.as_str() {
                "out_dir" => {}
                "n" | "m" | "grid_x_count" | "grid_z_count" | "nodes_per_panel" | "samples" | "seed" => {
                    self.get_u64(k)?;
                }
                _ => {
                    let v = self.get_f64(k)?.unwrap_or(0.0);
                    if !(v > 0.0) {
                        return Err(ConfigError::NonPositiveTolerance { key: k.clone() });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Sets a key, as a command-line override would.
    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.get(key)
            .map(|v| v.parse::<f64>().map_err(|_| ConfigError::BadValue { key: key.into(), value: v.into() }))
            .transpose()
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>, ConfigError> {
        self.get(key)
            .map(|v| v.parse::<u64>().map_err(|_| ConfigError::BadValue { key: key.into(), value: v.into() }))
            .transpose()
    }

    pub fn seed(&self) -> Result<u64, ConfigError> {
        self.get_u64("seed")?.ok_or(ConfigError::MissingSeed)
    }

    /// Canonical form: sorted `key=value` lines.
    pub fn canonical(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// SHA-256 of the canonical form, hex encoded.
    pub fn hash(&self) -> String {
        hex(&Sha256::digest(self.canonical().as_bytes()))
    }
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_whitespace() {
        let c = ExperimentConfig::parse("# header\nn = 1\n m=1 # inline\n\nseed = 7\n").unwrap();
        assert_eq!(c.get("m"), Some("1"));
        assert_eq!(c.seed().unwrap(), 7);
    }

    #[test]
    fn rejects_unknown_and_bad_values() {
        assert!(matches!(ExperimentConfig::parse("colour = red"), Err(ConfigError::UnknownKey { line: 1, .. })));
        assert!(matches!(ExperimentConfig::parse("tol_fit = -1"), Err(ConfigError::NonPositiveTolerance { .. })));
        assert!(matches!(ExperimentConfig::parse("n = two"), Err(ConfigError::BadValue { .. })));
        assert!(matches!(ExperimentConfig::parse("n"), Err(ConfigError::Syntax { .. })));
        assert_eq!(ExperimentConfig::parse("n = 1").unwrap().seed(), Err(ConfigError::MissingSeed));
    }

    #[test]
    fn hash_ignores_order_and_comments() {
        let a = ExperimentConfig::parse("n = 1\nseed = 3").unwrap();
        let b = ExperimentConfig::parse("seed=3 # s\nn=1").unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), ExperimentConfig::parse("n = 1\nseed = 4").unwrap().hash());
    }
}
