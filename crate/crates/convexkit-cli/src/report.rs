//! Report records, stdout tables, and plot-data CSV.
//!
//! JSON reports are deterministic: object keys are emitted in sorted order
//! and no wall-clock data enters the serialization, so identical inputs and
//! seed produce byte-identical files. Timing is printed on standard output
//! only.

use std::io::Write;

use serde_json::Value;

use convexkit::scalar::{decimal_string, format_rational, Rational};

use crate::fail::CliError;

pub const DECIMAL_DIGITS: u32 = 12;

/// What one command run produced: the machine-readable record pieces plus the
/// human-readable table lines.
pub struct Outcome {
    /// Sorted-key JSON payload with the operation's results.
    pub result: Value,
    /// Present exactly when the run found a hypothesis violation; the
    /// process then exits with code 2.
    pub certificate: Option<Value>,
    /// Lines for standard output.
    pub table: Vec<String>,
    /// Plot data, when the command produces a function-valued result.
    pub plot: Option<PlotData>,
}

impl Outcome {
    pub fn new(result: Value) -> Self {
        Outcome { result, certificate: None, table: Vec::new(), plot: None }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.table.push(s.into());
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        self.table.push(format!("{key:<14} {value}"));
    }
}

/// One input file as recorded in the report.
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// The full report envelope written to `--json`.
pub fn record(
    operation: &str,
    mode_label: &Value,
    seed: u64,
    inputs: &[InputDigest],
    outcome: &Outcome,
) -> Value {
    let inputs: Vec<Value> = inputs
        .iter()
        .map(|i| serde_json::json!({ "path": i.path, "sha256": i.sha256 }))
        .collect();
    serde_json::json!({
        "schema_version": "1",
        "operation": operation,
        "mode": mode_label,
        "seed": seed,
        "inputs": inputs,
        "result": outcome.result,
        "certificate": outcome.certificate,
        "status": if outcome.certificate.is_some() { "violation" } else { "ok" },
    })
}

// ---------------------------------------------------------------------------
// Formatting helpers shared by tables and result payloads.
// ---------------------------------------------------------------------------

pub fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("[{}]", parts.join(", "))
}

pub fn fmt_points(points: &[Vec<Rational>]) -> String {
    let parts: Vec<String> = points.iter().map(|p| fmt_vec(p)).collect();
    parts.join("  ")
}

// ---------------------------------------------------------------------------
// Plot-data CSV.
// ---------------------------------------------------------------------------

/// One CSV cell: a rational, an infinity (from TOP values), or undefined.
#[derive(Debug, Clone)]
pub enum Cell {
    Rat(Rational),
    Infinite,
    Blank,
}

impl Cell {
    fn exact(&self) -> String {
        match self {
            Cell::Rat(r) => format_rational(r),
            Cell::Infinite => "top".to_string(),
            Cell::Blank => String::new(),
        }
    }

    fn decimal(&self) -> String {
        match self {
            Cell::Rat(r) => decimal_string(r, DECIMAL_DIGITS),
            Cell::Infinite => "inf".to_string(),
            Cell::Blank => String::new(),
        }
    }
}

/// Function-valued output sampled on a grid. Every numeric column appears
/// twice: exact `p/q` and a 12-digit decimal rendering.
pub struct PlotData {
    pub coord_names: Vec<String>,
    pub value_names: Vec<String>,
    /// (grid point, value cells) — `rows[i].1.len() == value_names.len()`.
    pub rows: Vec<(Vec<Rational>, Vec<Cell>)>,
}

impl PlotData {
    /// Coordinate column names for a `dim`-dimensional grid: `x` in one
    /// dimension, `x1..xd` otherwise.
    pub fn coord_names(dim: usize) -> Vec<String> {
        if dim == 1 {
            vec!["x".to_string()]
        } else {
            (1..=dim).map(|i| format!("x{i}")).collect()
        }
    }

    pub fn to_csv(&self) -> String {
        let mut header: Vec<String> = Vec::new();
        for name in &self.coord_names {
            header.push(name.clone());
            header.push(format!("{name}_dec"));
        }
        for name in &self.value_names {
            header.push(name.clone());
            header.push(format!("{name}_dec"));
        }
        let mut out = header.join(",");
        out.push('\n');
        for (point, cells) in &self.rows {
            debug_assert_eq!(point.len(), self.coord_names.len());
            debug_assert_eq!(cells.len(), self.value_names.len());
            let mut fields: Vec<String> = Vec::new();
            for c in point {
                fields.push(format_rational(c));
                fields.push(decimal_string(c, DECIMAL_DIGITS));
            }
            for cell in cells {
                fields.push(cell.exact());
                fields.push(cell.decimal());
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn write_json(path: &str, record: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(record)
        .map_err(|e| CliError::input(format!("serializing report: {e}")))?;
    text.push('\n');
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(text.as_bytes()))
        .map_err(|e| CliError::input(format!("{path}: {e}")))
}

pub fn write_csv(path: &str, plot: &PlotData) -> Result<(), CliError> {
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(plot.to_csv().as_bytes()))
        .map_err(|e| CliError::input(format!("{path}: {e}")))
}
