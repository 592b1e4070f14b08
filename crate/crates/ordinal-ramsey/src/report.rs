//! Uniform command-line report output: one space-joined `key=value`
//! summary line plus free-form payload lines in text mode, one JSON
//! object in `--json` mode (payload lines are collected under
//! `"lines"`).

use serde_json::{Map, Value};

#[derive(Debug, Default)]
pub struct Report {
    json: bool,
    fields: Vec<(String, Value)>,
    lines: Vec<String>,
}

impl Report {
    pub fn new(json: bool) -> Self {
        Report {
            json,
            fields: Vec::new(),
            lines: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.push((key.to_string(), value.into()));
    }

    pub fn push_line(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    /// Prints the report to stdout.
    pub fn finish(self) {
        if self.json {
            let mut obj = Map::new();
            for (k, v) in self.fields {
                obj.insert(k, v);
            }
            if !self.lines.is_empty() {
                obj.insert(
                    "lines".to_string(),
                    Value::Array(self.lines.into_iter().map(Value::String).collect()),
                );
            }
            println!("{}", Value::Object(obj));
        } else {
            if !self.fields.is_empty() {
                let parts: Vec<String> = self
                    .fields
                    .iter()
                    .map(|(k, v)| match v {
                        Value::String(s) => format!("{k}={s}"),
                        other => format!("{k}={other}"),
                    })
                    .collect();
                println!("{}", parts.join(" "));
            }
            for line in &self.lines {
                println!("{line}");
            }
        }
    }
}
