//! Run configuration, restriction rules file and golden fixture.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::{ConfigError, RestrictionRules};

pub const DEFAULT_RULES: &str = include_str!("../data/restrictions.toml");
pub const DEFAULT_GOLDEN: &str = include_str!("../data/golden.toml");
pub const DEFAULT_Q_MAX: u32 = 9;
pub const MIN_Q_MAX: u32 = 5;

#[derive(Debug, Error)]
pub enum UsageError {
    #[error("q_max must be at least {MIN_Q_MAX}, got {0}")]
    QMax(u32),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed TOML in {path}: {message}")]
    Toml { path: String, message: String },
    #[error(transparent)]
    Rules(#[from] ConfigError),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    q_max: Option<u32>,
    golden: Option<PathBuf>,
    restrictions: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub key: String,
    pub expected: Vec<i64>,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Golden {
    #[serde(rename = "entry")]
    pub entries: Vec<GoldenEntry>,
}

impl Golden {
    pub fn parse(text: &str, origin: &str) -> Result<Golden, UsageError> {
        toml::from_str(text).map_err(|e| UsageError::Toml { path: origin.to_string(), message: e.to_string() })
    }

    pub fn builtin() -> Golden {
        Golden::parse(DEFAULT_GOLDEN, "builtin golden fixture").expect("builtin golden fixture parses")
    }

    pub fn get(&self, key: &str) -> Option<&[i64]> {
        self.entries.iter().find(|e| e.key == key).map(|e| e.expected.as_slice())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("golden fixture serializes")
    }
}

pub fn parse_rules(text: &str, origin: &str) -> Result<RestrictionRules, UsageError> {
    let f: ConfigFile =
        toml::from_str(text).map_err(|e| UsageError::Toml { path: origin.to_string(), message: e.to_string() })?;
    let entries = f.restrictions.unwrap_or_default();
    Ok(RestrictionRules::from_entries(&entries)?)
}

pub fn builtin_rules() -> RestrictionRules {
    parse_rules(DEFAULT_RULES, "builtin restrictions").expect("builtin restriction rules parse")
}

/// Renders rules in the configuration file format.
pub fn rules_to_toml(rules: &RestrictionRules) -> String {
    let mut t = toml::Table::new();
    let inner: toml::Table = rules.to_entries().into_iter().map(|(k, v)| (k, toml::Value::String(v))).collect();
    t.insert("restrictions".to_string(), toml::Value::Table(inner));
    toml::to_string(&t).expect("rules serialize")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub q_max: u32,
    pub stage: Option<String>,
    pub rules: RestrictionRules,
    pub golden: Golden,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            q_max: DEFAULT_Q_MAX,
            stage: None,
            rules: builtin_rules(),
            golden: Golden::builtin(),
            format: Format::Json,
            out: None,
        }
    }
}

impl RunConfig {
    /// Reads a configuration file. A [restrictions] table replaces the built-in
    /// rules as a whole; `golden` is resolved relative to the file.
    pub fn load(path: &Path) -> Result<RunConfig, UsageError> {
        let text = std::fs::read_to_string(path).map_err(|e| UsageError::Io { path: path.to_path_buf(), source: e })?;
        let origin = path.display().to_string();
        let f: ConfigFile = toml::from_str(&text).map_err(|e| UsageError::Toml { path: origin.clone(), message: e.to_string() })?;
        let mut cfg = RunConfig::default();
        if let Some(q) = f.q_max {
            cfg.q_max = q;
        }
        if let Some(entries) = f.restrictions {
            cfg.rules = RestrictionRules::from_entries(&entries)?;
        }
        if let Some(g) = f.golden {
            let gp = path.parent().map(|d| d.join(&g)).unwrap_or(g);
            let text = std::fs::read_to_string(&gp).map_err(|e| UsageError::Io { path: gp.clone(), source: e })?;
            cfg.golden = Golden::parse(&text, &gp.display().to_string())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        if self.q_max < MIN_Q_MAX {
            return Err(UsageError::QMax(self.q_max));
        }
        Ok(())
    }
}
