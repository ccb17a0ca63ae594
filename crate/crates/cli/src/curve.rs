//! CSV curves on a uniform angle grid.

use std::f64::consts::PI;
use std::fmt::Write as _;

/// `θ_k = kπ/grid` for `k = 0..=grid`, with the last point exactly `π`.
pub fn angle_grid(grid: usize) -> Vec<f64> {
    (0..=grid)
        .map(|k| {
            if k == grid {
                PI
            } else {
                k as f64 * PI / grid as f64
            }
        })
        .collect()
}

/// A table of named columns over a shared first column, written as CSV with
/// `#`-prefixed metadata lines.
#[derive(Debug, Clone, Default)]
pub struct CurveTable {
    pub meta: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CurveTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            meta: Vec::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, line: impl Into<String>) {
        self.meta.push(line.into());
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for m in &self.meta {
            let _ = writeln!(out, "# {m}");
        }
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_value(*v)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// Seventeen significant digits in scientific notation.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Parses a rendered table back into its metadata, header and numeric rows.
pub fn parse_table(text: &str) -> Result<CurveTable, String> {
    let mut table = CurveTable::default();
    for line in text.lines() {
        if let Some(m) = line.strip_prefix('#') {
            table.meta.push(m.trim_start().to_string());
        } else if table.header.is_empty() {
            table.header = line.split(',').map(str::to_string).collect();
        } else if !line.is_empty() {
            let row = line
                .split(',')
                .map(|c| c.parse::<f64>().map_err(|e| format!("{c}: {e}")))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != table.header.len() {
                return Err(format!(
                    "row has {} cells, header has {}",
                    row.len(),
                    table.header.len()
                ));
            }
            table.rows.push(row);
        }
    }
    Ok(table)
}
