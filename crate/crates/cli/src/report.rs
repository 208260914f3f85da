use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateLine {
    pub name: String,
    pub anchor: String,
    pub passed: bool,
}

/// The single output of every command. Text output is a rendering of it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    /// Canonical forms of the inputs; parsing them again yields the same values.
    pub inputs: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
    pub certificates: Vec<CertificateLine>,
    pub status: Status,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            results: BTreeMap::new(),
            certificates: Vec::new(),
            status: Status::Pass,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.inputs.insert(key.to_string(), to_value(value));
        self
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.results.insert(key.to_string(), to_value(value));
        self
    }

    pub fn certify(&mut self, name: &str, anchor: &str, passed: bool) -> &mut Self {
        self.certificates.push(CertificateLine {
            name: name.to_string(),
            anchor: anchor.to_string(),
            passed,
        });
        if !passed {
            self.status = Status::Fail;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        for (title, map) in [("inputs", &self.inputs), ("results", &self.results)] {
            if map.is_empty() {
                continue;
            }
            let _ = writeln!(out, "{title}:");
            for (k, v) in map {
                let _ = writeln!(out, "  {k}: {}", render_value(v));
            }
        }
        if !self.certificates.is_empty() {
            let _ = writeln!(out, "certificates:");
            for c in &self.certificates {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "  [{mark}] {} ({})", c.name, c.anchor);
            }
        }
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
        };
        let _ = writeln!(out, "status: {status}");
        out
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or_else(|e| Value::String(format!("<unserializable: {e}>")))
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
