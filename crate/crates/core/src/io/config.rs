use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::funcs::{parse_func1, Func1};
use crate::types::Vec3;

/// Flat `key=value` configuration. Keys may be dotted (`grid.x.lo`), `#`
/// starts a comment. Every key must be read before [`Config::finish`], which
/// rejects the rest as unknown.
#[derive(Debug, Default)]
pub struct Config {
    entries: BTreeMap<String, (String, usize)>,
    used: RefCell<BTreeSet<String>>,
}

fn valid_key(k: &str) -> bool {
    !k.is_empty()
        && k.split('.').all(|part| !part.is_empty() && part.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-'))
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse { line: line_no, msg: format!("expected key=value, got {line:?}") })?;
            let k = k.trim();
            if !valid_key(k) {
                return Err(Error::Parse { line: line_no, msg: format!("invalid key {k:?}") });
            }
            if cfg.entries.contains_key(k) {
                return Err(Error::Parse { line: line_no, msg: format!("duplicate key {k:?}") });
            }
            cfg.entries.insert(k.to_string(), (v.trim().to_string(), line_no));
        }
        Ok(cfg)
    }

    /// Applies a `key=value` override; later overrides replace earlier values.
    pub fn set_override(&mut self, spec: &str) -> Result<()> {
        let (k, v) = spec.split_once('=').ok_or_else(|| Error::Config(format!("override {spec:?} is not key=value")))?;
        let k = k.trim();
        if !valid_key(k) {
            return Err(Error::Config(format!("invalid key {k:?}")));
        }
        self.entries.insert(k.to_string(), (v.trim().to_string(), 0));
        Ok(())
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    fn raw(&self, key: &str) -> Option<&str> {
        let v = self.entries.get(key).map(|(v, _)| v.as_str());
        if v.is_some() {
            self.used.borrow_mut().insert(key.to_string());
        }
        v
    }

    fn bad(&self, key: &str, what: &str, e: impl std::fmt::Display) -> Error {
        match self.entries.get(key) {
            Some((_, line)) if *line > 0 => Error::Config(format!("key {key} (line {line}): expected {what}: {e}")),
            _ => Error::Config(format!("key {key}: expected {what}: {e}")),
        }
    }

    pub fn opt_str(&self, key: &str) -> Option<String> {
        self.raw(key).map(str::to_string)
    }

    pub fn str(&self, key: &str) -> Result<String> {
        self.opt_str(key).ok_or_else(|| Error::Config(format!("missing key {key}")))
    }

    /// Parses an optional value with `FromStr`.
    pub fn opt_parse<T: FromStr>(&self, key: &str, what: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|e| self.bad(key, what, e)),
        }
    }

    pub fn opt_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.opt_parse::<f64>(key, "a number")? {
            Some(v) if !v.is_finite() => Err(self.bad(key, "a finite number", v)),
            v => Ok(v),
        }
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        self.opt_f64(key)?.ok_or_else(|| Error::Config(format!("missing key {key}")))
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.opt_f64(key)?.unwrap_or(default))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.opt_parse::<usize>(key, "a non-negative integer")?.unwrap_or(default))
    }

    pub fn opt_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        let Some(v) = self.raw(key) else { return Ok(None) };
        v.split(',')
            .map(|s| {
                let x: f64 = s.trim().parse().map_err(|e| self.bad(key, "a comma-separated list of numbers", e))?;
                if x.is_finite() { Ok(x) } else { Err(self.bad(key, "finite numbers", x)) }
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    fn fixed<const N: usize>(&self, key: &str) -> Result<Option<[f64; N]>> {
        match self.opt_list(key)? {
            None => Ok(None),
            Some(v) => <[f64; N]>::try_from(v.as_slice()).map(Some).map_err(|_| self.bad(key, &format!("{N} components"), v.len())),
        }
    }

    pub fn opt_vec3(&self, key: &str) -> Result<Option<Vec3>> {
        self.fixed::<3>(key)
    }

    pub fn vec3(&self, key: &str) -> Result<Vec3> {
        self.opt_vec3(key)?.ok_or_else(|| Error::Config(format!("missing key {key}")))
    }

    pub fn vec3_or(&self, key: &str, default: Vec3) -> Result<Vec3> {
        Ok(self.opt_vec3(key)?.unwrap_or(default))
    }

    pub fn opt_vec4(&self, key: &str) -> Result<Option<[f64; 4]>> {
        self.fixed::<4>(key)
    }

    pub fn opt_func(&self, key: &str) -> Result<Option<Func1>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => parse_func1(v).map(Some).map_err(|e| self.bad(key, "a function spec", e)),
        }
    }

    pub fn func_or(&self, key: &str, default: &str) -> Result<Func1> {
        match self.opt_func(key)? {
            Some(f) => Ok(f),
            None => parse_func1(default),
        }
    }

    /// Rejects every key that was never read.
    pub fn finish(&self) -> Result<()> {
        let used = self.used.borrow();
        let unknown: Vec<String> = self
            .entries
            .iter()
            .filter(|(k, _)| !used.contains(*k))
            .map(|(k, (_, line))| if *line > 0 { format!("{k} (line {line})") } else { k.clone() })
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(format!("unknown keys: {}", unknown.join(", "))))
        }
    }
}
