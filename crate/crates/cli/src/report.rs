use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Ok,
    Obstructed,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
    pub status: Status,
    /// Boolean answer for predicate commands.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<bool>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            results: BTreeMap::new(),
            status: Status::Ok,
            verdict: None,
        }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.inputs.insert(key.to_string(), to_value(v));
        self
    }

    pub fn result(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.results.insert(key.to_string(), to_value(v));
        self
    }

    pub fn exit_code(&self) -> i32 {
        match (self.status, self.verdict) {
            (Status::Error, _) => 2,
            (Status::Obstructed, _) | (_, Some(false)) => 1,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let status = serde_json::to_value(self.status).unwrap();
        let _ = writeln!(out, "{}: {}", self.command, status.as_str().unwrap_or_default());
        if let Some(v) = self.verdict {
            let _ = writeln!(out, "  verdict: {v}");
        }
        for (k, v) in &self.inputs {
            flatten(&mut out, &format!("input.{k}"), v);
        }
        for (k, v) in &self.results {
            flatten(&mut out, k, v);
        }
        out
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("value serializes")
}

fn flatten(out: &mut String, key: &str, v: &Value) {
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                flatten(out, &format!("{key}.{k}"), v);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            for (i, v) in a.iter().enumerate() {
                flatten(out, &format!("{key}[{i}]"), v);
            }
        }
        Value::String(s) => {
            let _ = writeln!(out, "  {key}: {s}");
        }
        other => {
            let _ = writeln!(out, "  {key}: {other}");
        }
    }
}
