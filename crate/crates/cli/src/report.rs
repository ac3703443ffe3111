//! Report shape shared by every subcommand, plus JSON encoding helpers
//! for the linear-algebra payloads.
//!
//! Reports are deterministic by construction: no timestamps, verdict
//! maps serialize in sorted key order, and floats use the shortest
//! round-trip encoding. Identical (input bytes, seed, tool version)
//! therefore produce byte-identical JSON.

use std::fmt::Write as _;

use clap::ValueEnum;
use decoh::{ComplexMatrix, ComplexVector, Event, Tolerance};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

/// Report format selector (`--output`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Pretty-printed JSON.
    Json,
    /// Terse human-readable summary of the same verdicts.
    Text,
}

/// The analysis report every subcommand emits: tool identity, a digest
/// of the input file, the seed and tolerance in effect, and a map of
/// verdicts. `representation` carries the serialized construction when
/// a `represent` action succeeds.
#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub input_digest: String,
    pub seed: u64,
    pub tolerance: ToleranceReport,
    pub verdicts: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representation: Option<Value>,
}

#[derive(Debug, Serialize)]
pub struct ToleranceReport {
    pub rel: f64,
    pub abs: f64,
}

impl AnalysisReport {
    pub fn new(
        command: impl Into<String>,
        input_digest: String,
        seed: u64,
        tol: Tolerance,
        verdicts: Value,
    ) -> Self {
        AnalysisReport {
            tool: "decoh",
            tool_version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            input_digest,
            seed,
            tolerance: ToleranceReport { rel: tol.rel, abs: tol.abs },
            verdicts,
            representation: None,
        }
    }

    pub fn with_representation(mut self, rep: Value) -> Self {
        self.representation = Some(rep);
        self
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut out =
                    serde_json::to_string_pretty(self).expect("report holds only plain data");
                out.push('\n');
                out
            }
            OutputFormat::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.tool, self.tool_version);
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "input: {}", self.input_digest);
        let _ = writeln!(out, "seed: {}", self.seed);
        let _ = writeln!(out, "tolerance: rel={} abs={}", self.tolerance.rel, self.tolerance.abs);
        let _ = writeln!(out, "verdicts:");
        if let Value::Object(map) = &self.verdicts {
            for (key, value) in map {
                let _ = writeln!(out, "  {key}: {}", compact(value));
            }
        }
        if let Some(rep) = &self.representation {
            let kind = rep.get("kind").and_then(Value::as_str).unwrap_or("?");
            let dim = rep.get("dim").and_then(Value::as_u64).unwrap_or(0);
            let _ = writeln!(
                out,
                "representation: {kind}, dim {dim} (use --output json for the payload)"
            );
        }
        out
    }
}

fn compact(value: &Value) -> String {
    serde_json::to_string(value).expect("verdict values are plain data")
}

/// `z` as the two-element array `[re, im]`.
pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn vector_json(v: &ComplexVector) -> Value {
    Value::Array(v.entries().iter().copied().map(complex_json).collect())
}

/// Row-major nested arrays of `[re, im]` pairs.
pub fn matrix_json(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array((0..m.cols()).map(|c| complex_json(m.get(r, c))).collect()))
            .collect(),
    )
}

/// An event-pair witness as two bitmasks, or `null` when absent.
pub fn event_pair_json(witness: Option<(Event, Event)>) -> Value {
    match witness {
        Some((a, b)) => json!([a.mask(), b.mask()]),
        None => Value::Null,
    }
}

/// An event-triple witness as three bitmasks, or `null` when absent.
pub fn event_triple_json(witness: Option<(Event, Event, Event)>) -> Value {
    match witness {
        Some((a, b, c)) => json!([a.mask(), b.mask(), c.mask()]),
        None => Value::Null,
    }
}
