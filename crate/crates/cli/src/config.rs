//! `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment, blank lines are ignored.
//! Every error names the offending line.

use std::collections::HashMap;
use std::path::PathBuf;
use std::str::FromStr;

use nsgeom::flow::Scheme;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {second}: duplicate key {key:?} (first set on line {first})")]
    Duplicate { key: String, first: usize, second: usize },
    #[error("line {line}: {key} = {value:?}: {reason}")]
    Invalid { line: usize, key: String, value: String, reason: String },
    #[error("missing required key {key:?}")]
    Missing { key: &'static str },
}

/// Initial velocity field.
#[derive(Clone, Debug, PartialEq)]
pub enum InitKind {
    Abc { a: f64, b: f64, c: f64 },
    TaylorGreen,
    RandomDivfree { seed: u64 },
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub nu: f64,
    pub dt: f64,
    pub t_end: f64,
    pub init: InitKind,
    /// Steps between snapshots and diagnostics samples.
    pub diag_every: usize,
    pub mc_paths: usize,
    pub mc_dt: f64,
    pub seed: u64,
    pub scheme: Scheme,
    pub epsilon: f64,
}

const KEYS: [&str; 12] = [
    "grid.n",
    "fluid.nu",
    "time.dt",
    "time.t_end",
    "time.diag_every",
    "init.kind",
    "init.params",
    "mc.paths",
    "mc.dt",
    "seed",
    "scheme",
    "epsilon",
];

struct Entry {
    line: usize,
    value: String,
}

struct Entries(HashMap<&'static str, Entry>);

impl Entries {
    fn raw(&self, key: &'static str) -> Result<&Entry, ConfigError> {
        self.0.get(key).ok_or(ConfigError::Missing { key })
    }

    fn invalid(&self, key: &'static str, reason: impl Into<String>) -> ConfigError {
        let e = &self.0[key];
        ConfigError::Invalid { line: e.line, key: key.to_string(), value: e.value.clone(), reason: reason.into() }
    }

    fn parse<T: FromStr>(&self, key: &'static str) -> Result<T, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        let e = self.raw(key)?;
        e.value.parse::<T>().map_err(|err| self.invalid(key, err.to_string()))
    }

    fn parse_or<T: FromStr>(&self, key: &'static str, default: T) -> Result<T, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        if self.0.contains_key(key) {
            self.parse(key)
        } else {
            Ok(default)
        }
    }

    fn positive(&self, key: &'static str, value: f64) -> Result<f64, ConfigError> {
        if value > 0.0 && value.is_finite() {
            Ok(value)
        } else {
            Err(self.invalid(key, "must be positive and finite"))
        }
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut map: HashMap<&'static str, Entry> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            return Err(ConfigError::Syntax { line, text: raw.to_string() });
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(ConfigError::Syntax { line, text: raw.to_string() });
        }
        let Some(key) = KEYS.iter().find(|&&known| known == k) else {
            return Err(ConfigError::UnknownKey { line, key: k.to_string() });
        };
        if let Some(prev) = map.get(key) {
            return Err(ConfigError::Duplicate { key: k.to_string(), first: prev.line, second: line });
        }
        map.insert(key, Entry { line, value: v.to_string() });
    }
    let e = Entries(map);

    let n: usize = e.parse("grid.n")?;
    if n < 4 || n % 2 != 0 {
        return Err(e.invalid("grid.n", "must be even and at least 4"));
    }
    let nu = e.positive("fluid.nu", e.parse("fluid.nu")?)?;
    let dt = e.positive("time.dt", e.parse("time.dt")?)?;
    let t_end: f64 = e.parse("time.t_end")?;
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(e.invalid("time.t_end", "must be non-negative and finite"));
    }
    let diag_every: usize = e.parse_or("time.diag_every", 10)?;
    if diag_every == 0 {
        return Err(e.invalid("time.diag_every", "must be at least 1"));
    }
    let seed: u64 = e.parse_or("seed", 0)?;
    let init = parse_init(&e, seed)?;
    let mc_paths: usize = e.parse_or("mc.paths", 10_000)?;
    if mc_paths < 2 {
        return Err(e.invalid("mc.paths", "need at least 2 paths"));
    }
    let mc_dt = e.parse_or("mc.dt", 0.01)?;
    if e.0.contains_key("mc.dt") {
        e.positive("mc.dt", mc_dt)?;
    }
    let scheme: Scheme = e.parse_or("scheme", Scheme::IfRk4)?;
    let epsilon: f64 = e.parse_or("epsilon", 0.0)?;
    if scheme == Scheme::Mollified {
        if !e.0.contains_key("epsilon") {
            return Err(ConfigError::Missing { key: "epsilon" });
        }
        e.positive("epsilon", epsilon)?;
    } else if e.0.contains_key("epsilon") && !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(e.invalid("epsilon", "must be non-negative"));
    }
    Ok(RunConfig { n, nu, dt, t_end, init, diag_every, mc_paths, mc_dt, seed, scheme, epsilon })
}

fn parse_init(e: &Entries, seed: u64) -> Result<InitKind, ConfigError> {
    let kind = e.raw("init.kind")?.value.as_str();
    let params = e.0.get("init.params").map(|p| p.value.as_str());
    match kind {
        "abc" => {
            let Some(p) = params else {
                return Ok(InitKind::Abc { a: 1.0, b: 1.0, c: 1.0 });
            };
            let vals: Result<Vec<f64>, _> = p.split(',').map(|s| s.trim().parse::<f64>()).collect();
            match vals {
                Ok(v) if v.len() == 3 && v.iter().all(|x| x.is_finite()) => Ok(InitKind::Abc { a: v[0], b: v[1], c: v[2] }),
                _ => Err(e.invalid("init.params", "abc expects A,B,C")),
            }
        }
        "taylor_green" => {
            if params.is_some() {
                return Err(e.invalid("init.params", "taylor_green takes no parameters"));
            }
            Ok(InitKind::TaylorGreen)
        }
        "random_divfree" => match params {
            None => Ok(InitKind::RandomDivfree { seed }),
            Some(_) => Ok(InitKind::RandomDivfree { seed: e.parse("init.params")? }),
        },
        "file" => match params {
            Some(p) => Ok(InitKind::File(PathBuf::from(p))),
            None => Err(ConfigError::Missing { key: "init.params" }),
        },
        _ => Err(e.invalid("init.kind", "expected abc, taylor_green, random_divfree or file")),
    }
}
