//! Flat `key = value` files: one pair per line, `#` starts a comment.

use std::collections::BTreeMap;
use std::str::FromStr;

use super::CliError;

#[derive(Debug)]
pub struct KvConfig {
    section: &'static str,
    entries: BTreeMap<String, (String, usize)>,
    used: Vec<String>,
}

impl KvConfig {
    /// `section` prefixes field paths in error messages.
    pub fn parse(text: &str, section: &'static str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "{section}: line {}: expected key = value",
                    idx + 1
                )));
            };
            let key = k.trim().to_string();
            if key.is_empty() {
                return Err(CliError::Config(format!(
                    "{section}: line {}: empty key",
                    idx + 1
                )));
            }
            if entries
                .insert(key.clone(), (v.trim().to_string(), idx + 1))
                .is_some()
            {
                return Err(CliError::Config(format!("{section}.{key}: duplicate key")));
            }
        }
        Ok(Self {
            section,
            entries,
            used: Vec::new(),
        })
    }

    pub fn get<T: FromStr>(&mut self, key: &str, default: T) -> Result<T, CliError> {
        self.used.push(key.to_string());
        match self.entries.get(key) {
            None => Ok(default),
            Some((v, line)) => v.parse().map_err(|_| {
                CliError::Config(format!(
                    "{}.{key} (line {line}): cannot parse '{v}'",
                    self.section
                ))
            }),
        }
    }

    /// Fails on keys that no `get` asked for.
    pub fn finish(self) -> Result<(), CliError> {
        match self.entries.keys().find(|k| !self.used.contains(k)) {
            Some(k) => Err(CliError::Config(format!(
                "{}.{k}: unknown key",
                self.section
            ))),
            None => Ok(()),
        }
    }

    pub fn field(&self, key: &str) -> String {
        format!("{}.{key}", self.section)
    }
}
