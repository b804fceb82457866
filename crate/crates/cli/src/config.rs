//! Config records and the file-then-flags merge.
//!
//! Every key of a config file has a flag of the same name (`max_nodes` ↔
//! `--max-nodes`). Values are layered as defaults, then `limits` from the
//! environment, then the file, then flags.

use std::path::{Path, PathBuf};

use pcentered::OracleLimits;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Debski,
    Subdivided,
    Gnp,
    Path,
    Cycle,
    Clique,
    Star,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum GraphFormat {
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMethod {
    Search,
    Subsets,
    Bruteforce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum NablaMode {
    Exact,
    Greedy,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateConfig {
    pub family: Family,
    #[serde(default = "one")]
    pub p: u32,
    #[serde(default = "one")]
    pub t: u32,
    #[serde(default = "two")]
    pub b: u64,
    pub s: Option<u32>,
    pub n: Option<usize>,
    pub q: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    #[serde(default = "json")]
    pub format: GraphFormat,
    pub out: Option<PathBuf>,
    pub limits: OracleLimits,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub graph: PathBuf,
    pub coloring: PathBuf,
    pub p: Option<usize>,
    pub p1: Option<usize>,
    pub p2: Option<usize>,
    #[serde(default = "search")]
    pub method: VerifyMethod,
    pub out: Option<PathBuf>,
    pub witness_out: Option<PathBuf>,
    pub limits: OracleLimits,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    pub graph: PathBuf,
    pub p: usize,
    pub max_nodes: Option<u64>,
    /// Wall-clock budget; results under it depend on machine speed.
    pub max_millis: Option<u64>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    pub n: u64,
    pub p: u32,
    /// Edge probability; defaults to the threshold `q_n`.
    pub q: Option<f64>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NablaConfig {
    pub graph: PathBuf,
    pub r: usize,
    #[serde(default = "exact")]
    pub mode: NablaMode,
    pub out: Option<PathBuf>,
    pub limits: OracleLimits,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    pub p: u32,
    #[serde(default)]
    pub seed: u64,
    pub trials: u32,
    pub q: Option<f64>,
    pub colorings: Option<u32>,
    pub exact_limit: Option<usize>,
    pub solve_nodes: Option<u64>,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn params(&self) -> pcentered::random_lb::ProbeParams {
        let d = pcentered::random_lb::ProbeParams::default();
        pcentered::random_lb::ProbeParams {
            n: self.n,
            p: self.p,
            seed: self.seed,
            trials: self.trials,
            q: self.q,
            colorings: self.colorings.unwrap_or(d.colorings),
            exact_limit: self.exact_limit.unwrap_or(d.exact_limit),
            solve_nodes: self.solve_nodes.unwrap_or(d.solve_nodes),
        }
    }
}

fn one() -> u32 {
    1
}
fn two() -> u64 {
    2
}
fn json() -> GraphFormat {
    GraphFormat::Json
}
fn search() -> VerifyMethod {
    VerifyMethod::Search
}
fn exact() -> NablaMode {
    NablaMode::Exact
}

/// Recursively overlays `top` onto `base`; objects merge, anything else
/// replaces.
fn overlay(base: &mut Value, top: Value) {
    match (base, top) {
        (Value::Object(b), Value::Object(t)) => {
            for (k, v) in t {
                overlay(b.entry(k).or_insert(Value::Null), v);
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Builds a config from the optional file and the flag overrides. With
/// `with_limits`, the `limits` key starts from the environment defaults.
pub fn load<C: DeserializeOwned>(
    file: Option<&Path>,
    flags: Value,
    with_limits: bool,
) -> Result<C, CliError> {
    let mut merged = Value::Object(Map::new());
    if with_limits {
        let limits = OracleLimits::from_env().map_err(CliError::from)?;
        overlay(
            &mut merged,
            serde_json::json!({ "limits": serde_json::to_value(limits).expect("limits serialize") }),
        );
    }
    if let Some(path) = file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input("io", format!("{}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::input("config", format!("{}: {e}", path.display())))?;
        if !value.is_object() {
            return Err(CliError::input(
                "config",
                format!("{}: expected a JSON object", path.display()),
            ));
        }
        overlay(&mut merged, value);
    }
    overlay(&mut merged, flags);
    serde_json::from_value(merged).map_err(|e| CliError::input("config", e.to_string()))
}
