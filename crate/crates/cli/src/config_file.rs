//! Flat `key = value` run files. Keys are flag names without the leading
//! dashes; `#` starts a comment. Repeating a key appends for list-valued
//! flags and otherwise the last value wins.

use crate::error::{CliError, Result};
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    entries: Vec<(String, String)>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            context: format!("reading {}", path.display()),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::validation(format!(
                    "config line {}: expected key = value",
                    i + 1
                )));
            };
            let key = key.trim().trim_start_matches("--").to_string();
            if key.is_empty() {
                return Err(CliError::validation(format!(
                    "config line {}: empty key",
                    i + 1
                )));
            }
            entries.push((key, value.trim().to_string()));
        }
        Ok(Self { entries })
    }

    /// Fails on any key outside `known`.
    pub fn check_keys(&self, known: &[&str]) -> Result<()> {
        for (key, _) in &self.entries {
            if !known.contains(&key.as_str()) {
                return Err(CliError::validation(format!(
                    "config key `{key}` is not valid here (expected one of: {})",
                    known.join(", ")
                )));
            }
        }
        Ok(())
    }

    pub fn last(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn all(&self, key: &str) -> Vec<String> {
        self.entries
            .iter()
            .filter(|(k, _)| k == key)
            .map(|(_, v)| v.clone())
            .collect()
    }

    /// The flag value if given, else the file value parsed as `T`.
    pub fn pick<T: FromStr>(&self, key: &str, flag: Option<T>) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.last(key)
            .map(|v| {
                v.parse::<T>().map_err(|_| {
                    CliError::validation(format!("config `{key}`: cannot parse `{v}`"))
                })
            })
            .transpose()
    }

    /// The flag values if any were given, else every file value for `key`.
    pub fn pick_all(&self, key: &str, flag: &[String]) -> Vec<String> {
        if flag.is_empty() {
            self.all(key)
        } else {
            flag.to_vec()
        }
    }
}
