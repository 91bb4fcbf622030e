use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use crate::manifest::RunManifest;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// A documented CSV column.
pub struct Column {
    pub name: &'static str,
    pub doc: &'static str,
}

pub const fn col(name: &'static str, doc: &'static str) -> Column {
    Column { name, doc }
}

/// Help text listing every column of a CSV layout.
pub fn csv_help(columns: &[Column]) -> String {
    let width = columns.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = format!(
        "CSV output (--format csv, schema version {}): a leading `# manifest: {{...}}` line, then a header row and these columns:\n",
        crate::manifest::SCHEMA_VERSION
    );
    for c in columns {
        out.push_str(&format!("  {:width$}  {}\n", c.name, c.doc));
    }
    out
}

pub struct Table {
    pub columns: &'static [Column],
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &'static [Column]) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// What a command produced: its JSON result, the CSV view of it, and the
/// witness of a failed check, if any.
pub struct Report {
    pub result: Value,
    pub table: Table,
    pub failure: Option<String>,
    /// Replaces the whole rendering when set.
    pub bare: Option<String>,
}

impl Report {
    pub fn new(result: impl Serialize, table: Table) -> Self {
        Report { result: serde_json::to_value(result).expect("result serializes"), table, failure: None, bare: None }
    }
}

pub fn render(manifest: &RunManifest, report: &Report, format: Format) -> Result<String> {
    if let Some(text) = &report.bare {
        return Ok(text.clone());
    }
    match format {
        Format::Json => {
            let doc = json!({ "manifest": manifest, "result": report.result });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        Format::Csv => {
            let mut out = format!("# manifest: {}\n", serde_json::to_string(manifest)?);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(report.table.columns.iter().map(|c| c.name))?;
            for row in &report.table.rows {
                w.write_record(row)?;
            }
            out.push_str(std::str::from_utf8(&w.into_inner()?)?);
            Ok(out)
        }
    }
}

/// Where rendered output goes: `--out`, else `<out-dir>/<command>.<ext>`,
/// else stdout.
pub fn emit(text: &str, out: Option<&PathBuf>, out_dir: Option<&PathBuf>, command: &str, format: Format) -> Result<()> {
    let path = match (out, out_dir) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let ext = match format {
                Format::Json => "json",
                Format::Csv => "csv",
            };
            Some(dir.join(format!("{command}.{ext}")))
        }
        (None, None) => None,
    };
    match path {
        Some(p) => fs::write(&p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

/// Plain decimal text of a float, as written into CSV cells.
pub fn num(x: f64) -> String {
    x.to_string()
}
