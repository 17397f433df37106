use std::fmt;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use sandpile_lab::{Configuration, Limits};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

/// An error in how the tool was invoked rather than in the data it was given.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Inline JSON when the argument starts with `{` or `[`, a file path otherwise.
pub fn load_json<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading {what} from {arg}"))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing {what}"))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ConfigInput {
    Bare(Vec<i64>),
    Wrapped(Configuration),
}

/// A configuration given either as `[h1, h2, …]` or as `{"heights": [...]}`.
pub fn load_configuration(arg: &str) -> Result<Configuration> {
    Ok(match load_json::<ConfigInput>(arg, "configuration")? {
        ConfigInput::Bare(h) => Configuration::new(h),
        ConfigInput::Wrapped(c) => c,
    })
}

/// Limits from an optional TOML file, then the `--threads` flag, then the
/// `SANDPILE_LAB_THREADS` cap.
pub fn resolve_limits(config_file: Option<&Path>, threads: Option<usize>) -> Result<Limits> {
    let mut limits = match config_file {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config file {}", path.display()))?;
            toml::from_str::<Limits>(&text)
                .with_context(|| format!("parsing config file {}", path.display()))?
        }
        None => Limits::default(),
    };
    if threads.is_some() {
        limits.threads = threads;
    }
    if let Ok(raw) = std::env::var("SANDPILE_LAB_THREADS") {
        let cap: usize = raw.trim().parse().map_err(|_| {
            usage(format!(
                "SANDPILE_LAB_THREADS must be a positive integer, got {raw:?}"
            ))
        })?;
        let cap = cap.max(1);
        limits.threads = Some(limits.threads.map_or(cap, |t| t.min(cap)));
    }
    Ok(limits)
}

/// Renders a JSON value as plain `key: value` lines; arrays print one
/// element per line.
pub fn table(value: &Value) -> String {
    let mut out = String::new();
    match value {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            for (k, v) in map {
                out.push_str(&format!("{k:<width$}  {}\n", scalar(v)));
            }
        }
        Value::Array(items) => {
            for v in items {
                out.push_str(&scalar(v));
                out.push('\n');
            }
        }
        other => {
            out.push_str(&scalar(other));
            out.push('\n');
        }
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            items.iter().map(scalar).collect::<Vec<_>>().join(" ")
        }
        Value::Object(map)
            if map.len() == 2 && map.contains_key("upper") && map.contains_key("lower") =>
        {
            format!("{} {}", scalar(&map["upper"]), scalar(&map["lower"]))
        }
        other => other.to_string(),
    }
}
