//! The JSON (or CSV) document printed by every command.

use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub args: Value,
    pub outputs: Value,
    /// Replaces the JSON document when set and the run succeeded.
    pub csv: Option<String>,
    pub error: Option<ErrorInfo>,
}

impl RunReport {
    pub fn new(args: Value, outputs: Value) -> Self {
        RunReport { args, outputs, csv: None, error: None }
    }

    pub fn with_error(mut self, kind: &str, message: impl Into<String>) -> Self {
        self.error = Some(ErrorInfo { kind: kind.to_string(), message: message.into() });
        self
    }

    pub fn error_message(&self) -> Option<&str> {
        self.error.as_ref().map(|e| e.message.as_str())
    }

    pub fn render(&self, command: &str, canonical: bool, wall_time_ms: Option<f64>) -> String {
        if let (Some(csv), None) = (&self.csv, &self.error) {
            return csv.clone();
        }
        let mut doc = Map::new();
        doc.insert("command".into(), json!(command));
        doc.insert("args".into(), self.args.clone());
        doc.insert("outputs".into(), self.outputs.clone());
        if let Some(e) = &self.error {
            doc.insert("error".into(), json!(e));
        }
        if let Some(ms) = wall_time_ms {
            doc.insert("wall_time_ms".into(), json!(ms));
        }
        let mut doc = Value::Object(doc);
        if canonical {
            add_canonical(&mut doc);
        }
        let mut text = serde_json::to_string_pretty(&doc).expect("report is valid JSON");
        text.push('\n');
        text
    }
}

/// Adds `{a1, a2}` with `a1 = (u + v) / 2`, `a2 = (u - v) / 2` to every
/// object that is exactly a `{u, v}` pair.
pub fn add_canonical(value: &mut Value) {
    match value {
        Value::Object(map) => {
            let pair = match (map.len(), map.get("u").and_then(Value::as_f64), map.get("v").and_then(Value::as_f64)) {
                (2, Some(u), Some(v)) => Some((u, v)),
                _ => None,
            };
            if let Some((u, v)) = pair {
                let x = dmetric::Hyp::new(u, v).expect("report values are finite");
                let (a1, a2) = x.to_canonical();
                map.insert("a1".into(), json!(a1));
                map.insert("a2".into(), json!(a2));
            } else {
                map.values_mut().for_each(add_canonical);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(add_canonical),
        _ => {}
    }
}
