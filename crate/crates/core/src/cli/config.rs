//! Flat `key = value` config files and flag/config/default resolution.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use super::CliError;

/// Keys accepted in a config file; they mirror the long flag names.
const KEYS: &[&str] =
    &["n", "N", "trials", "seed", "threads", "out", "format", "samples", "model", "stat", "bound", "t", "plot"];

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Blank lines and `#` comments are ignored; later keys win.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", lineno + 1)))?;
            let k = k.trim().trim_start_matches("--");
            if !KEYS.contains(&k) {
                return Err(CliError::Usage(format!("config line {}: unknown key '{k}'", lineno + 1)));
            }
            values.insert(k.to_string(), v.trim().trim_matches('"').to_string());
        }
        Ok(Self { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.values
            .get(key)
            .map(|v| v.parse().map_err(|_| CliError::Usage(format!("config: bad value '{v}' for '{key}'"))))
            .transpose()
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, CliError> {
        self.values
            .get(key)
            .map(|v| {
                v.split(',')
                    .map(|x| x.trim().parse().map_err(|_| CliError::Usage(format!("config: bad entry '{x}' in '{key}'"))))
                    .collect()
            })
            .transpose()
    }
}

/// Flag, then config, then default.
pub fn pick<T: FromStr>(flag: Option<T>, cfg: &ConfigFile, key: &str, default: T) -> Result<T, CliError> {
    Ok(match flag {
        Some(v) => v,
        None => cfg.get(key)?.unwrap_or(default),
    })
}

pub fn pick_list<T: FromStr>(flag: Option<Vec<T>>, cfg: &ConfigFile, key: &str, default: &[T]) -> Result<Vec<T>, CliError>
where
    T: Clone,
{
    let v = match flag {
        Some(v) => v,
        None => cfg.list(key)?.unwrap_or_else(|| default.to_vec()),
    };
    if v.is_empty() {
        return Err(CliError::Usage(format!("'{key}' must not be empty")));
    }
    Ok(v)
}
