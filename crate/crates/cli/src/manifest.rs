use std::path::Path;

use anyhow::{Context, Result};
use gfl_core::groebner::Budget;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const MANIFEST_SCHEMA: &str = "gfl.manifest/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_ms: u128,
}

/// Everything needed to rerun a command and check its payload.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: String,
    pub command: String,
    /// Arguments after the program name, replayed verbatim.
    pub argv: Vec<String>,
    pub parameters: Value,
    pub seeds: Vec<u64>,
    pub field: Option<String>,
    pub budgets: Option<Budget>,
    pub version: String,
    pub timing: Timing,
    pub exit_code: u8,
    pub results: Value,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let m: RunManifest =
            serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))?;
        anyhow::ensure!(
            m.schema == MANIFEST_SCHEMA,
            "unsupported manifest schema {:?}",
            m.schema
        );
        Ok(m)
    }
}
