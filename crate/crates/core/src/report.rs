//! Structured reports and their text and JSON encodings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::linalg::parse_scalar;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub analysis: String,
    pub verdict: String,
    pub result: Value,
}

impl Section {
    pub fn new(analysis: impl Into<String>, verdict: impl Into<String>, result: impl Serialize) -> Self {
        let result = serde_json::to_value(result).expect("report values serialize");
        Section { analysis: analysis.into(), verdict: verdict.into(), result }
    }

    pub fn error(analysis: impl Into<String>, message: impl std::fmt::Display) -> Self {
        let message = message.to_string();
        Section {
            analysis: analysis.into(),
            verdict: format!("error: {message}"),
            result: serde_json::json!({ "error": message }),
        }
    }

    pub fn is_error(&self) -> bool {
        self.verdict.starts_with("error:")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario_name: String,
    pub tool_version: String,
    pub seed: u64,
    pub sections: Vec<Section>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl Report {
    pub fn new(scenario_name: impl Into<String>, seed: u64) -> Self {
        Report {
            scenario_name: scenario_name.into(),
            tool_version: TOOL_VERSION.to_string(),
            seed,
            sections: Vec::new(),
        }
    }

    pub fn push(&mut self, section: Section) {
        self.sections.push(section);
    }

    pub fn section(&self, analysis: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.analysis == analysis)
    }

    pub fn to_json(&self) -> String {
        to_compact_json(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario: {}", self.scenario_name);
        let _ = writeln!(out, "tool_version: {}", self.tool_version);
        let _ = writeln!(out, "seed: {}", self.seed);
        for (i, section) in self.sections.iter().enumerate() {
            let _ = writeln!(out);
            let _ = writeln!(out, "[{}] {}", i + 1, section.analysis);
            let _ = writeln!(out, "verdict: {}", section.verdict);
            write_value(&mut out, &section.result, 1);
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
        }
    }
}

/// Pretty JSON with arrays of primitives kept on one line, so matrices print
/// one row per line.
pub fn to_compact_json(value: impl Serialize) -> String {
    let value = serde_json::to_value(value).expect("values serialize");
    let mut out = String::new();
    write_json(&mut out, &value, 0);
    out.push('\n');
    out
}

fn write_json(out: &mut String, value: &Value, depth: usize) {
    match value {
        Value::Array(items) if items.iter().all(|v| !v.is_array() && !v.is_object()) => {
            let items: Vec<String> = items.iter().map(Value::to_string).collect();
            let _ = write!(out, "[{}]", items.join(", "));
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                indent(out, depth + 1);
                write_json(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            indent(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (key, item)) in map.iter().enumerate() {
                indent(out, depth + 1);
                let _ = write!(out, "{}: ", Value::String(key.clone()));
                write_json(out, item, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            indent(out, depth);
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn write_value(out: &mut String, value: &Value, depth: usize) {
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                indent(out, depth);
                match inline(v) {
                    Some(text) => {
                        let _ = writeln!(out, "{key}: {text}");
                    }
                    None => {
                        let _ = writeln!(out, "{key}:");
                        write_value(out, v, depth + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                indent(out, depth);
                match inline(item) {
                    Some(text) => {
                        let _ = writeln!(out, "- {text}");
                    }
                    None => {
                        let _ = writeln!(out, "-");
                        write_value(out, item, depth + 1);
                    }
                }
            }
        }
        other => {
            indent(out, depth);
            let _ = writeln!(out, "{}", inline(other).unwrap_or_default());
        }
    }
}

/// Scalars, vectors (arrays of scalar literals) and matrices (arrays of such
/// rows) render on one line.
fn inline(value: &Value) -> Option<String> {
    match value {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.is_empty() => Some("[]".into()),
        Value::Array(items) => {
            if let Some(entries) = strings(items) {
                return Some(format!("({})", entries.join(", ")));
            }
            let rows: Option<Vec<Vec<&str>>> = items.iter().map(|r| r.as_array().and_then(|r| strings(r))).collect();
            rows.map(|rows| {
                let rows: Vec<String> = rows.iter().map(|r| r.join(" ")).collect();
                format!("[{}]", rows.join("; "))
            })
        }
        Value::Object(map) if map.is_empty() => Some("{}".into()),
        Value::Object(_) => None,
    }
}

fn strings(items: &[Value]) -> Option<Vec<&str>> {
    items.iter().map(|v| v.as_str().filter(|s| parse_scalar(s).is_ok())).collect()
}
