use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};
use crate::input::{sha256_hex, InputFile};

pub const TOOL: &str = "radreward";

/// Machine-readable result of one scoring command.
///
/// `config` holds every option that affects the numbers; `config_hash` is
/// the SHA-256 of its compact JSON (keys sorted), so two reports with the
/// same hash and input digests were produced by identical runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub inputs: Vec<InputFile>,
    pub config: Value,
    pub config_hash: String,
    pub metrics: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_example: Option<Vec<Value>>,
}

impl ScoreReport {
    pub fn new(command: &str, inputs: Vec<InputFile>, config: Value) -> Self {
        let config_hash = sha256_hex(config.to_string().as_bytes());
        ScoreReport {
            tool: TOOL.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            inputs,
            config,
            config_hash,
            metrics: BTreeMap::new(),
            per_example: None,
        }
    }

    /// Adds a metric; each name may appear once.
    pub fn insert_metric(&mut self, name: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("metric values serialize");
        let previous = self.metrics.insert(name.to_string(), v);
        assert!(previous.is_none(), "metric {name} reported twice");
    }

    pub fn to_json_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Writes `text` to `out`, or to stdout when no path is given.
pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}
