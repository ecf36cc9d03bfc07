//! Flat INI-style run configuration.
//!
//! The format is plain `key = value` lines grouped under `[section]`
//! headers, one section per subcommand plus `[model]`. Blank lines and
//! `#` comments are ignored. Command-line flags override file values.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

/// Parsed configuration: section -> key -> raw value.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, String> {
        let mut cfg = RunConfig::default();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = name.trim().to_string();
                cfg.sections.entry(section.clone()).or_default();
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!("line {}: expected key = value", lineno + 1));
            };
            cfg.sections
                .entry(section.clone())
                .or_default()
                .insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(cfg)
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<RunConfig, String> {
        let path = path.as_ref();
        let text =
            fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections.get(section)?.get(key).map(String::as_str)
    }

    /// Flag value if given, else config value, else default.
    pub fn resolve<T: Clone + std::str::FromStr>(
        &self,
        flag: Option<T>,
        section: &str,
        key: &str,
        default: T,
    ) -> Result<T, String> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.get(section, key) {
            Some(raw) => raw
                .parse()
                .map_err(|_| format!("config [{section}] {key}: cannot parse {raw:?}")),
            None => Ok(default),
        }
    }

    /// Like [`resolve`](Self::resolve) but with no default.
    pub fn resolve_opt<T: Clone + std::str::FromStr>(
        &self,
        flag: Option<T>,
        section: &str,
        key: &str,
    ) -> Result<Option<T>, String> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.get(section, key) {
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| format!("config [{section}] {key}: cannot parse {raw:?}")),
            None => Ok(None),
        }
    }
}
