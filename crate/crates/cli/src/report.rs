use std::fmt::Write as _;

use horncode::normal_forms::Check;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &str, bytes: &[u8]) -> Self {
        let hash = Sha256::digest(bytes);
        let mut hex = String::with_capacity(64);
        for b in hash {
            write!(hex, "{b:02x}").expect("write to string");
        }
        InputDigest { path: path.to_string(), sha256: hex }
    }
}

/// Everything a run produced. Only deterministic data goes in here, so two
/// runs with the same inputs and seed render identical JSON lines.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub seed: u64,
    pub inputs: Vec<InputDigest>,
    /// Primary result of the subcommand, if any.
    pub result: Option<Value>,
    /// Plain-text outcome such as `NOT EQUIVALENT`, or the error message.
    pub message: Option<String>,
    pub checks: Vec<Check>,
    pub exit_code: i32,
}

impl RunReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }

    /// One JSON object per line: the command, each input, the result, each
    /// check, and a closing summary.
    pub fn to_json_lines(&self) -> String {
        let mut lines = vec![json!({ "command": self.command, "seed": self.seed })];
        lines.extend(self.inputs.iter().map(|i| json!({ "input": i.path, "sha256": i.sha256 })));
        if let Some(r) = &self.result {
            lines.push(json!({ "result": r }));
        }
        if let Some(m) = &self.message {
            lines.push(json!({ "message": m }));
        }
        lines.extend(self.checks.iter().map(|c| {
            json!({
                "check": c.name,
                "measured": c.measured,
                "expected": c.expected,
                "tolerance": c.tolerance,
                "pass": c.pass,
            })
        }));
        lines.push(json!({ "exit_code": self.exit_code, "passed": self.passed(), "failed": self.failed() }));
        lines.iter().map(|l| l.to_string() + "\n").collect()
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        if let Some(r) = &self.result {
            out.push_str(&serde_json::to_string_pretty(r).expect("result serializes"));
            out.push('\n');
        }
        if let Some(m) = &self.message {
            out.push_str(m);
            out.push('\n');
        }
        for c in &self.checks {
            let tol = c.tolerance.map(|t| format!(" ± {t}")).unwrap_or_default();
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            writeln!(out, "{verdict}  {}  measured {}  expected {}{tol}", c.name, c.measured, c.expected).expect("write");
        }
        if !self.checks.is_empty() {
            writeln!(out, "{} passed, {} failed", self.passed(), self.failed()).expect("write");
        }
        out
    }
}
