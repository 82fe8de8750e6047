//! The JSON document every command emits.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::config::ExperimentConfig;

/// Bumped on any change to the envelope or to a verdict sub-object.
pub const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportEnvelope {
    pub schema_version: String,
    pub command: String,
    pub config: ExperimentConfig,
    /// One entry per module invoked, keyed by module name.
    pub verdicts: Map<String, Value>,
    pub provenance: Provenance,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub seed: u64,
    pub samples: usize,
    pub threads: usize,
    pub wall_time_ms: u64,
    pub tool_version: String,
}

impl ReportEnvelope {
    pub fn new(command: &str, config: ExperimentConfig) -> Self {
        let provenance = Provenance {
            seed: config.estimation.seed,
            samples: config.estimation.samples,
            threads: rayon::current_num_threads(),
            wall_time_ms: 0,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        };
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            config,
            verdicts: Map::new(),
            provenance,
            warnings: Vec::new(),
        }
    }

    pub fn insert(&mut self, module: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report types serialize");
        self.verdicts.insert(module.to_string(), v);
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        let m = message.into();
        if !self.warnings.contains(&m) {
            self.warnings.push(m);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope serializes")
    }

    /// The envelope without fields that legitimately vary between runs.
    pub fn reproducible_view(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("envelope serializes");
        if let Some(p) = v.get_mut("provenance").and_then(Value::as_object_mut) {
            p.remove("wall_time_ms");
            p.remove("threads");
        }
        v
    }
}
