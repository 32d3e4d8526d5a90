//! Machine-readable report envelope shared by the checkers and the CLI.

use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;

/// Versioned JSON envelope: every report embeds the tool version, the
/// condition or command id, a full parameter echo, grid and tolerance
/// metadata. Maps are ordered so serialization is byte-deterministic.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool_version: String,
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Value>,
    pub grid: Value,
    pub tolerances: Value,
}

impl Report {
    pub fn new(command: &str, status: &str) -> Self {
        Report {
            schema: 1,
            tool_version: crate::TOOL_VERSION.to_string(),
            command: command.to_string(),
            params: BTreeMap::new(),
            status: status.to_string(),
            c_min: None,
            witness: None,
            values: None,
            grid: Value::Null,
            tolerances: Value::Null,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable report")
    }
}
