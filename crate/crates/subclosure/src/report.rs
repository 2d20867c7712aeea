//! Machine-readable report assembly.
//!
//! Every object is a `serde_json::Map`, which keeps keys sorted, so equal
//! inputs serialize to equal bytes. Non-finite numbers become `null`.

use serde::Serialize;
use serde_json::{json, Map, Value};
use subclosure_core::{MarginReport, Tolerances};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug)]
pub struct Report {
    command: String,
    request: Value,
    provenance: Value,
    margins: Vec<Value>,
    values: Map<String, Value>,
    flags: Map<String, Value>,
    artifacts: Map<String, Value>,
    summary: Vec<String>,
}

pub fn num(x: f64) -> Value {
    // serde_json maps NaN and infinities to null
    json!(x)
}

impl Report {
    pub fn new(command: &str, request: &impl Serialize, tol: &Tolerances, seed: u64) -> Self {
        Self {
            command: command.to_string(),
            request: serde_json::to_value(request).unwrap_or(Value::Null),
            provenance: json!({
                "version": VERSION,
                "tolerances": {
                    "rank_tol": tol.rank_tol,
                    "eig_tol": tol.eig_tol,
                    "margin_tol": tol.margin_tol,
                },
                "seed": seed,
            }),
            margins: Vec::new(),
            values: Map::new(),
            flags: Map::new(),
            artifacts: Map::new(),
            summary: Vec::new(),
        }
    }

    /// Adds every margin, value and flag of `r`, with ids prefixed by
    /// `prefix.` unless `prefix` is empty.
    pub fn absorb(&mut self, prefix: &str, r: &MarginReport) {
        let name = |id: &str| if prefix.is_empty() { id.to_string() } else { format!("{prefix}.{id}") };
        for m in &r.entries {
            let id = name(&m.id);
            self.summary.push(format!("{id:<40} {:>14.6e}  {} ({})", m.value, m.verdict.as_str(), m.kind.as_str()));
            self.margins.push(json!({
                "id": id,
                "value": num(m.value),
                "kind": m.kind.as_str(),
                "verdict": m.verdict.as_str(),
            }));
        }
        for (k, v) in &r.values {
            self.values.insert(name(k), num(*v));
        }
        for (k, b) in &r.flags {
            self.flags.insert(name(k), Value::Bool(*b));
        }
    }

    pub fn push_margin(&mut self, id: &str, value: f64, tol: &Tolerances) {
        let mut r = MarginReport::new();
        r.push(id, value, tol);
        self.absorb("", &r);
    }

    pub fn push_margin_estimate(&mut self, id: &str, value: f64, tol: &Tolerances) {
        let mut r = MarginReport::new();
        r.push_estimate(id, value, tol);
        self.absorb("", &r);
    }

    pub fn value(&mut self, id: &str, v: f64) {
        self.values.insert(id.to_string(), num(v));
    }

    pub fn flag(&mut self, id: &str, b: bool) {
        self.flags.insert(id.to_string(), Value::Bool(b));
    }

    pub fn artifact(&mut self, id: &str, v: impl Serialize) {
        self.artifacts.insert(id.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }

    /// Human-readable lines for `--verbose`.
    pub fn summary(&self) -> String {
        let mut out = format!("{}\n", self.command);
        for l in &self.summary {
            out.push_str("  ");
            out.push_str(l);
            out.push('\n');
        }
        out
    }

    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "request": self.request,
            "provenance": self.provenance,
            "margins": self.margins,
            "values": self.values,
            "flags": self.flags,
            "artifacts": self.artifacts,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        s.push('\n');
        s
    }
}

/// `{"error": {"kind", "message", "exit_code"}}`.
pub fn error_json(kind: &str, message: &str, exit_code: i32) -> String {
    let mut s = serde_json::to_string_pretty(&json!({
        "error": { "kind": kind, "message": message, "exit_code": exit_code }
    }))
    .expect("error serializes");
    s.push('\n');
    s
}
