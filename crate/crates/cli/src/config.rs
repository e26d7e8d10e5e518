//! Flat `key=value` run configuration.
//!
//! Config files hold one `key=value` per line with `#` comments. Command-line
//! `key=value` arguments override file entries; every key must be declared by
//! the command's [`Schema`], and malformed input is reported with its source
//! line.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::UsageError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    File { path: String, line: usize },
    Argument,
    Default,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::File { path, line } => write!(f, "{path}:{line}"),
            Origin::Argument => f.write_str("command line"),
            Origin::Default => f.write_str("default"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub value: String,
    pub origin: Origin,
}

/// Raw entries before validation against a schema.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawConfig {
    entries: BTreeMap<String, Entry>,
}

fn valid_key(key: &str) -> bool {
    !key.is_empty()
        && key
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '-')
}

fn split_pair(text: &str) -> Option<(&str, &str)> {
    let (k, v) = text.split_once('=')?;
    let (k, v) = (k.trim(), v.trim());
    valid_key(k).then_some((k, v))
}

impl RawConfig {
    /// Parses config-file text; `path` is only used in messages.
    pub fn parse_file(text: &str, path: &str) -> Result<Self, UsageError> {
        let mut cfg = RawConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (k, v) = split_pair(body)
                .ok_or_else(|| UsageError(format!("{path}:{line}: expected key=value, got {body:?}")))?;
            let origin = Origin::File {
                path: path.to_string(),
                line,
            };
            if let Some(prev) = cfg.entries.get(k) {
                return Err(UsageError(format!(
                    "{path}:{line}: key {k} already set at {}",
                    prev.origin
                )));
            }
            cfg.entries.insert(
                k.to_string(),
                Entry {
                    value: v.to_string(),
                    origin,
                },
            );
        }
        Ok(cfg)
    }

    /// Applies `key=value` arguments; a bare first word becomes `positional_key`.
    pub fn apply_args(&mut self, args: &[String], positional_key: Option<&str>) -> Result<(), UsageError> {
        let mut seen = Vec::new();
        for (i, arg) in args.iter().enumerate() {
            let (k, v) = match (split_pair(arg), positional_key) {
                (Some(kv), _) => kv,
                (None, Some(pk)) if i == 0 && !arg.contains('=') => (pk, arg.as_str()),
                _ => return Err(UsageError(format!("expected key=value, got {arg:?}"))),
            };
            if seen.contains(&k) {
                return Err(UsageError(format!("key {k} given twice on the command line")));
            }
            seen.push(k);
            self.set(k, v, Origin::Argument);
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str, origin: Origin) {
        self.entries.insert(
            key.to_string(),
            Entry {
                value: value.to_string(),
                origin,
            },
        );
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    /// Checks keys against `schema` and fills in defaults.
    pub fn resolve(&self, schema: &Schema) -> Result<Resolved, UsageError> {
        for (k, e) in &self.entries {
            if !schema.allows(k) {
                return Err(UsageError(format!(
                    "{}: unknown key {k} (accepted: {})",
                    e.origin,
                    schema.describe()
                )));
            }
        }
        let mut entries = self.entries.clone();
        for (k, default) in schema.keys {
            if let (Some(v), false) = (default, entries.contains_key(*k)) {
                entries.insert(
                    k.to_string(),
                    Entry {
                        value: v.to_string(),
                        origin: Origin::Default,
                    },
                );
            }
        }
        Ok(Resolved { entries })
    }
}

/// Key prefix and the predicate its suffix must satisfy.
pub type KeyFamily = (&'static str, fn(&str) -> bool);

/// Accepted keys for one command: fixed keys with optional defaults plus an
/// optional predicate for families such as `p01`.
pub struct Schema {
    pub keys: &'static [(&'static str, Option<&'static str>)],
    pub family: Option<KeyFamily>,
}

impl Schema {
    fn allows(&self, key: &str) -> bool {
        self.keys.iter().any(|(k, _)| *k == key) || self.family.is_some_and(|(_, f)| f(key))
    }

    fn describe(&self) -> String {
        let mut names: Vec<&str> = self.keys.iter().map(|(k, _)| *k).collect();
        if let Some((label, _)) = self.family {
            names.push(label);
        }
        names.join(", ")
    }
}

/// Validated configuration with typed accessors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolved {
    entries: BTreeMap<String, Entry>,
}

impl Resolved {
    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    pub fn has(&self, key: &str) -> bool {
        self.raw(key).is_some_and(|v| !v.is_empty())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    fn fail(&self, key: &str, msg: impl fmt::Display) -> UsageError {
        match self.entries.get(key) {
            Some(e) => UsageError(format!("{}: key {key}: {msg}", e.origin)),
            None => UsageError(format!("key {key}: {msg}")),
        }
    }

    /// Parses `key` with `f`; `None` when absent or empty.
    pub fn opt<T, E: fmt::Display>(
        &self,
        key: &str,
        f: impl Fn(&str) -> Result<T, E>,
    ) -> Result<Option<T>, UsageError> {
        match self.raw(key) {
            Some(v) if !v.is_empty() => f(v).map(Some).map_err(|e| self.fail(key, e)),
            _ => Ok(None),
        }
    }

    pub fn req<T, E: fmt::Display>(&self, key: &str, f: impl Fn(&str) -> Result<T, E>) -> Result<T, UsageError> {
        self.opt(key, f)?.ok_or_else(|| self.fail(key, "is required"))
    }

    pub fn value<T: FromStr>(&self, key: &str) -> Result<T, UsageError>
    where
        T::Err: fmt::Display,
    {
        self.req(key, str::parse::<T>)
    }

    /// The resolved key/value map embedded in every report.
    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.entries.iter().map(|(k, e)| (k.clone(), e.value.clone())).collect()
    }

    /// Renders the config back into file syntax.
    pub fn to_file_text(&self) -> String {
        self.entries.iter().map(|(k, e)| format!("{k}={}\n", e.value)).collect()
    }
}
