use serde::Serialize;
use serde_json::{Map, Value};

use crate::{Invocation, EXIT_NEGATIVE, EXIT_OK};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NoSolution,
    Error,
}

/// The machine-readable report. Field order is the serialized key order.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub status: Status,
    pub system: String,
    pub command: String,
    pub payload: Map<String, Value>,
    pub diagnostics: Vec<String>,
    #[serde(skip)]
    pub code: i32,
}

impl Report {
    pub fn new(command: &str, system: &str, status: Status, payload: Map<String, Value>) -> Self {
        let code = if status == Status::Ok { EXIT_OK } else { EXIT_NEGATIVE };
        Report {
            status,
            system: system.to_string(),
            command: command.to_string(),
            payload,
            diagnostics: Vec::new(),
            code,
        }
    }

    /// A report without payload; exit code 1 maps to `no_solution`.
    pub fn error(command: &str, system: &str, code: i32, diagnostics: Vec<String>) -> Self {
        Report {
            status: if code == EXIT_NEGATIVE { Status::NoSolution } else { Status::Error },
            system: system.to_string(),
            command: command.to_string(),
            payload: Map::new(),
            diagnostics,
            code,
        }
    }

    pub fn with_diagnostic(mut self, d: impl Into<String>) -> Self {
        self.diagnostics.push(d.into());
        self
    }

    pub fn into_invocation(self, json: bool) -> Invocation {
        if json {
            let mut stdout = serde_json::to_string_pretty(&self).expect("report serializes");
            stdout.push('\n');
            return Invocation { code: self.code, stdout, stderr: String::new() };
        }
        let mut stdout = String::new();
        if !self.system.is_empty() {
            stdout.push_str(&format!("system: {}\n", self.system));
        }
        stdout.push_str(&format!("status: {}\n", status_word(self.status)));
        human(&self.payload, 0, &mut stdout);
        let stderr = self.diagnostics.iter().map(|d| format!("darbkit: {d}\n")).collect();
        Invocation { code: self.code, stdout, stderr }
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Ok => "ok",
        Status::NoSolution => "no_solution",
        Status::Error => "error",
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items.iter().map(scalar).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Value::Object(_) => None,
    }
}

fn human(map: &Map<String, Value>, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    for (k, v) in map {
        if let Some(s) = scalar(v) {
            out.push_str(&format!("{pad}{k}: {s}\n"));
            continue;
        }
        out.push_str(&format!("{pad}{k}:\n"));
        match v {
            Value::Object(m) => human(m, indent + 2, out),
            Value::Array(items) => {
                for (i, item) in items.iter().enumerate() {
                    match (item, scalar(item)) {
                        (_, Some(s)) => out.push_str(&format!("{pad}  - {s}\n")),
                        (Value::Object(m), None) => {
                            out.push_str(&format!("{pad}  [{i}]\n"));
                            human(m, indent + 4, out);
                        }
                        _ => unreachable!("payload arrays hold scalars or objects"),
                    }
                }
            }
            _ => unreachable!(),
        }
    }
}
