use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable that overrides the default brute-force vertex limit.
pub const ORACLE_LIMIT_ENV: &str = "PCENTERED_ORACLE_LIMIT";

/// Size limits for the exhaustive oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleLimits {
    /// Vertex limit for the brute-force verifier, treedepth and the classical
    /// chromatic oracles.
    pub vertices: usize,
    /// Vertex limit for exact shallow-minor density.
    pub nabla_vertices: usize,
    /// Largest subgraph the threat enumerator may be asked to list.
    pub threat_size: usize,
    /// Vertex cap for graph materialization by the generators.
    pub materialize: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            vertices: 12,
            nabla_vertices: 10,
            threat_size: 10,
            materialize: 1_000_000,
        }
    }
}

impl OracleLimits {
    /// Defaults, with `vertices` taken from `PCENTERED_ORACLE_LIMIT` when set.
    pub fn from_env() -> Result<Self> {
        let mut limits = Self::default();
        if let Ok(raw) = std::env::var(ORACLE_LIMIT_ENV) {
            limits.vertices = raw.trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("{ORACLE_LIMIT_ENV}={raw:?} is not an integer"))
            })?;
        }
        Ok(limits)
    }

    pub(crate) fn check(what: &'static str, size: usize, limit: usize) -> Result<()> {
        if size > limit {
            Err(Error::OverLimit {
                what,
                size: size as u128,
                limit: limit as u128,
            })
        } else {
            Ok(())
        }
    }
}
