//! Machine-readable experiment reports.
//!
//! Every run emits one JSON document embedding its full configuration, so a
//! report can be replayed exactly. With a fixed seed the document is
//! byte-identical across runs except for the `timestamp_unix_ms` and
//! `wall_time_ms` fields.

use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use gauss_psh_core::{AlphaCurve, InequalityReport, Verdict};

pub const SCHEMA: &str = "gauss-psh-lab/1";

#[derive(Debug, Clone, Serialize)]
pub struct VerdictLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub config: Value,
    pub results: Value,
    pub verdicts: Vec<VerdictLine>,
    pub seed: Option<u64>,
    pub timestamp_unix_ms: u128,
    pub wall_time_ms: u128,
}

impl Report {
    pub fn new(command: &str, config: Value, seed: Option<u64>) -> Self {
        Self {
            schema: SCHEMA,
            command: command.to_string(),
            config,
            results: Value::Null,
            verdicts: Vec::new(),
            seed,
            timestamp_unix_ms: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_millis())
                .unwrap_or(0),
            wall_time_ms: 0,
        }
    }

    pub fn verdict(&mut self, name: &str, pass: bool, detail: String) {
        self.verdicts.push(VerdictLine { name: name.to_string(), pass, detail });
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, out: Option<&Path>) -> std::io::Result<()> {
        match out {
            Some(path) => fs::write(path, self.to_json()),
            None => {
                print!("{}", self.to_json());
                Ok(())
            }
        }
    }
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::HoldsWithinError => "holds-within-error",
        Verdict::Violated => "violated",
    }
}

pub fn inequality_json(r: &InequalityReport) -> Value {
    serde_json::json!({
        "lhs": r.lhs,
        "rhs": r.rhs,
        "stderr_lhs": r.stderr_lhs,
        "stderr_rhs": r.stderr_rhs,
        "margin": r.margin,
        "verdict": verdict_str(r.verdict),
    })
}

pub fn alpha_curve_json(c: &AlphaCurve) -> Value {
    serde_json::json!({
        "t": c.t,
        "alpha": c.alpha,
        "d1": c.d1,
        "d2": c.d2,
        "cross_residual": c.cross_residual,
        "limit": c.limit,
    })
}

/// CSV rows (t, alpha, d1, d2) with a header line.
pub fn alpha_curve_csv(c: &AlphaCurve) -> String {
    let mut out = String::from("t,alpha,d1,d2\n");
    for i in 0..c.t.len() {
        out.push_str(&format!("{},{},{},{}\n", c.t[i], c.alpha[i], c.d1[i], c.d2[i]));
    }
    out
}
