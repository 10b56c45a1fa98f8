//! Deterministic output writers: CSV data files with fixed scientific
//! formatting, and a JSON verification report whose field names match the
//! published acceptance checks one to one.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

/// One verification entry: the measured value, the value it should sit at,
/// and how far away it is allowed to be (already multiplied by the
/// tolerance scale).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Check {
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Verification report: an ordered map so the serialized form is stable.
#[derive(Debug, Default, Serialize)]
pub struct Report {
    #[serde(flatten)]
    checks: BTreeMap<String, Check>,
}

impl Report {
    pub fn push(&mut self, name: &str, value: f64, target: f64, tolerance: f64) {
        let pass = (value - target).abs() <= tolerance;
        self.checks.insert(
            name.to_string(),
            Check { value, target, tolerance, pass },
        );
    }

    pub fn all_pass(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut body = serde_json::to_string_pretty(self)?;
        body.push('\n');
        fs::write(path, body).with_context(|| format!("writing {}", path.display()))
    }
}

/// Fixed 17-significant-digit scientific formatting, the one float shape
/// every CSV cell uses.
pub fn fmt_cell(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write a CSV file: mandatory header row, comma separators, LF endings.
pub fn write_csv(path: &Path, header: &str, rows: &[Vec<f64>]) -> Result<()> {
    let mut out = String::with_capacity(rows.len() * 24 * (header.len() / 8 + 1) + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let mut first = true;
        for cell in row {
            if !first {
                out.push(',');
            }
            out.push_str(&fmt_cell(*cell));
            first = false;
        }
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}
