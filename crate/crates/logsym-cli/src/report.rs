//! Rendering helpers shared by the commands: TSV tables for stdout and JSON
//! fragments. Everything iterates ordered containers, so identical inputs
//! produce byte-identical output.

use logsym_core::graded::BettiVector;
use logsym_core::symcalc::Certification;
use serde_json::{json, Value};

/// A TSV table: `#`-prefixed comment lines, a header row, then data rows.
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Table {
        Table {
            comments: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, text: impl Into<String>) {
        self.comments.push(text.into());
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&self.columns.join("\t"));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join("\t"));
            out.push('\n');
        }
        out
    }
}

/// Betti dimensions as JSON numbers (strings past u64, which desk-scale
/// models never reach).
pub fn dims_json(b: &BettiVector) -> Value {
    Value::Array(
        b.dims()
            .iter()
            .map(|d| match u64::try_from(d) {
                Ok(v) => json!(v),
                Err(_) => json!(d.to_string()),
            })
            .collect(),
    )
}

/// One `p`/`dim` row per degree.
pub fn dims_rows(table: &mut Table, b: &BettiVector) {
    for (p, d) in b.dims().iter().enumerate() {
        table.row(vec![p.to_string(), d.to_string()]);
    }
}

/// A vanishing witness as coordinates: quarter-turn grid points.
pub fn witness_text(names: &[String], quarters: &[u8]) -> String {
    const QUARTER: [&str; 4] = ["0", "π/2", "π", "3π/2"];
    quarters
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let name = names.get(i).cloned().unwrap_or_else(|| format!("θ{i}"));
            format!("{name}={}", QUARTER[(*q as usize) % 4])
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// (status word, optional witness) for a nonvanishing certificate.
pub fn certification_parts(c: &Certification) -> (&'static str, Option<&Vec<u8>>) {
    match c {
        Certification::Nonvanishing => ("nonvanishing", None),
        Certification::Vanishes { witness } => ("vanishes", witness.as_ref()),
        Certification::Undetermined => ("undetermined", None),
    }
}

pub fn witness_json(w: Option<&Vec<u8>>) -> Value {
    match w {
        Some(q) => json!(q),
        None => Value::Null,
    }
}
