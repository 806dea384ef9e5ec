//! Key=value configuration files.
//!
//! One `key=value` pair per line; blank lines and lines starting with `#`
//! are ignored. Values are kept as raw strings and parsed at the merge
//! site so that error messages can name both the key and the file.
//! Explicit command-line flags always win over config values, and keys a
//! command does not understand are rejected rather than ignored.

use anyhow::{anyhow, bail, Context, Result};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub struct KvConfig {
    map: BTreeMap<String, String>,
    path: PathBuf,
}

impl KvConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let mut map = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!(
                    "{}:{}: expected key=value, got {raw:?}",
                    path.display(),
                    idx + 1
                );
            };
            let key = key.trim().to_string();
            if map.insert(key.clone(), value.trim().to_string()).is_some() {
                bail!("{}:{}: duplicate key {key:?}", path.display(), idx + 1);
            }
        }
        Ok(Self {
            map,
            path: path.to_path_buf(),
        })
    }

    /// The config used when no file was given: empty, accepts nothing.
    pub fn empty() -> Self {
        Self {
            map: BTreeMap::new(),
            path: PathBuf::new(),
        }
    }

    /// Reject keys outside the command's vocabulary.
    pub fn ensure_known(&self, allowed: &[&str]) -> Result<()> {
        for key in self.map.keys() {
            if !allowed.contains(&key.as_str()) {
                bail!(
                    "config {}: unknown key {key:?} (known keys: {})",
                    self.path.display(),
                    allowed.join(", ")
                );
            }
        }
        Ok(())
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                anyhow!(
                    "config {}: key {key} has unparsable value {raw:?}",
                    self.path.display()
                )
            }),
        }
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.parse(key)
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.parse(key)
    }

    pub fn bool(&self, key: &str) -> Result<Option<bool>> {
        self.parse(key)
    }

    pub fn string(&self, key: &str) -> Option<String> {
        self.map.get(key).cloned()
    }
}
