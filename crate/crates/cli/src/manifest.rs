use attnplan::{Error, Result};
use serde::{Deserialize, Serialize};

use crate::RunParams;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Record written next to every command's outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub toolkit_version: String,
    pub command: String,
    pub params: RunParams,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(params: RunParams, wall_clock_seconds: f64, outputs: Vec<String>) -> Self {
        Manifest {
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            command: params.command.name().to_string(),
            params,
            wall_clock_seconds,
            outputs,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: Manifest = serde_json::from_str(text).map_err(|e| Error::Parse(format!("manifest: {e}")))?;
        if m.command != m.params.command.name() {
            return Err(Error::Validation {
                path: "command".into(),
                msg: format!("{:?} does not match params.command {:?}", m.command, m.params.command.name()),
            });
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest always serializes");
        s.push('\n');
        s
    }
}
