//! Run reports and their table, TSV and JSON renderings.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub description: String,
    /// Informational checks are reported but do not decide the exit code.
    pub gating: bool,
    pub pass: bool,
    pub tolerance: Option<f64>,
    pub residual: Option<f64>,
    pub elapsed_ms: f64,
    pub detail: Value,
}

impl Check {
    /// A yes/no check.
    pub fn exact(id: impl Into<String>, description: impl Into<String>, pass: bool, detail: Value) -> Self {
        Check {
            id: id.into(),
            description: description.into(),
            gating: true,
            pass,
            tolerance: None,
            residual: None,
            elapsed_ms: 0.0,
            detail,
        }
    }

    /// Passes iff `residual ≤ tolerance`.
    pub fn numeric(
        id: impl Into<String>,
        description: impl Into<String>,
        residual: f64,
        tolerance: f64,
        detail: Value,
    ) -> Self {
        Check {
            id: id.into(),
            description: description.into(),
            gating: true,
            pass: residual.is_finite() && residual <= tolerance,
            tolerance: Some(tolerance),
            residual: Some(residual),
            elapsed_ms: 0.0,
            detail,
        }
    }

    pub fn informational(mut self) -> Self {
        self.gating = false;
        self
    }

    pub fn failed(id: impl Into<String>, description: impl Into<String>, err: impl ToString) -> Self {
        Check::exact(id, description, false, json!({ "error": err.to_string() }))
    }

    pub fn blocks(&self) -> bool {
        self.gating && !self.pass
    }
}

/// Runs `f`, turning an error into a failed check and recording the elapsed time.
pub fn timed<E: ToString>(id: &str, description: &str, f: impl FnOnce() -> Result<Check, E>) -> Check {
    let start = Instant::now();
    let mut c = f().unwrap_or_else(|e| Check::failed(id, description, e));
    c.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    c
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub inputs: Value,
    pub outputs: Value,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub elapsed_ms: f64,
    pub seed: Option<u64>,
}

impl RunReport {
    pub fn new(
        command: &str,
        inputs: Value,
        outputs: Value,
        mut checks: Vec<Check>,
        seed: Option<u64>,
    ) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let pass = checks.iter().all(|c| !c.blocks());
        RunReport {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            inputs,
            outputs,
            checks,
            pass,
            elapsed_ms: 0.0,
            seed,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("id\tpass\tgating\tresidual\ttolerance\telapsed_ms\tdescription\n");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{:.1}\t{}",
                c.id,
                c.pass,
                c.gating,
                opt(c.residual),
                opt(c.tolerance),
                c.elapsed_ms,
                c.description
            );
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} (cellint {})", self.command, self.version);
        if let Value::Object(map) = &self.outputs {
            for (k, v) in map {
                let shown = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                let _ = writeln!(out, "  {k}: {shown}");
            }
        }
        if !self.checks.is_empty() {
            let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
            for c in &self.checks {
                let status = match (c.pass, c.gating) {
                    (true, _) => "PASS",
                    (false, true) => "FAIL",
                    (false, false) => "info",
                };
                let _ = writeln!(
                    out,
                    "{status}  {:width$}  residual {:>10}  tol {:>8}  {:>9.1} ms  {}",
                    c.id,
                    opt(c.residual),
                    opt(c.tolerance),
                    c.elapsed_ms,
                    c.description
                );
            }
            let failed = self.checks.iter().filter(|c| c.blocks()).count();
            let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), failed);
        }
        let _ = writeln!(out, "{} in {:.0} ms", if self.pass { "ok" } else { "FAILED" }, self.elapsed_ms);
        out
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.2e}")).unwrap_or_else(|| "-".into())
}
