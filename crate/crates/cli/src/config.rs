//! The optional `--config` file and its merge with command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Capacity,
    Enumerate,
    Fekete,
    Equilibrium,
    Chebyshev,
    Lemniscate,
    Robinson,
    Pellabel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Contents of a `--config` file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    #[serde(default)]
    pub params: Map<String, Value>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub output: OutputSpec,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("config {}: {e}", path.display())))
    }
}

/// Overlay the flags that were given onto the config's `params`, then read
/// the result back. Unknown config keys are rejected by `T`.
pub fn merge<T: Serialize + DeserializeOwned>(flags: &T, params: &Map<String, Value>) -> Result<T, Failure> {
    let mut base = params.clone();
    if let Value::Object(given) = serde_json::to_value(flags).map_err(|e| Failure::usage(e.to_string()))? {
        for (k, v) in given {
            if !v.is_null() {
                base.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(base)).map_err(|e| Failure::usage(format!("params: {e}")))
}

/// Tolerance `name`, if set, must be finite and positive; only names in
/// `allowed` are accepted.
pub fn tolerance(tols: &BTreeMap<String, f64>, allowed: &[&str], name: &str, default: f64) -> Result<f64, Failure> {
    if let Some(bad) = tols.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Failure::usage(format!(
            "unknown tolerance {bad:?} for this command (known: {})",
            allowed.join(", ")
        )));
    }
    match tols.get(name) {
        None => Ok(default),
        Some(&t) if t.is_finite() && t > 0.0 => Ok(t),
        Some(t) => Err(Failure::usage(format!("tolerance {name} must be positive, got {t}"))),
    }
}
