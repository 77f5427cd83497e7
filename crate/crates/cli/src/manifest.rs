use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

/// Everything needed to reproduce a run's artifacts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: u32,
    pub command: String,
    /// Resolved flag values keyed by flag name (snake case).
    pub parameters: BTreeMap<String, String>,
    pub artifacts: Vec<String>,
    pub tool_version: String,
    pub wall_time_ms: u64,
}

impl RunManifest {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        let manifest: RunManifest = serde_json::from_str(&text)?;
        if manifest.schema != SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "unsupported manifest schema {}",
                manifest.schema
            )));
        }
        Ok(manifest)
    }

    /// Command-line arguments that re-run this manifest (without `--out`).
    pub fn to_argv(&self) -> Vec<String> {
        let mut argv = vec![self.command.clone()];
        for (key, value) in &self.parameters {
            let flag = format!("--{}", key.replace('_', "-"));
            match value.as_str() {
                "true" => argv.push(flag),
                "false" => {}
                _ => {
                    argv.push(flag);
                    argv.push(value.clone());
                }
            }
        }
        argv
    }
}

/// Flatten a serialized argument struct into string parameters, dropping unset options.
pub fn parameters_of<T: Serialize>(args: &T) -> Result<BTreeMap<String, String>, CliError> {
    let value = serde_json::to_value(args)?;
    let mut out = BTreeMap::new();
    if let serde_json::Value::Object(map) = value {
        for (key, v) in map {
            let text = match v {
                serde_json::Value::Null => continue,
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            };
            out.insert(key, text);
        }
    }
    Ok(out)
}
