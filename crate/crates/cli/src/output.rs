//! Tabular output shared by all data-emitting commands: CSV with floats at
//! nine significant digits, or a flat JSON array mirroring the CSV columns.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use steersd::sig9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub enum Field {
    F64(f64),
    U64(u64),
    Bool(bool),
    Str(String),
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::F64(x) => sig9(*x),
            Field::U64(x) => x.to_string(),
            Field::Bool(x) => x.to_string(),
            Field::Str(s) => s.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Field::F64(x) => serde_json::json!(x),
            Field::U64(x) => serde_json::json!(x),
            Field::Bool(x) => serde_json::json!(x),
            Field::Str(s) => serde_json::json!(s),
        }
    }
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.columns.join(",");
                out.push('\n');
                for row in &self.rows {
                    debug_assert_eq!(row.len(), self.columns.len());
                    let line: Vec<String> = row.iter().map(Field::csv).collect();
                    out.push_str(&line.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: serde_json::Map<String, serde_json::Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, f)| ((*c).to_string(), f.json()))
                            .collect();
                        serde_json::Value::Object(obj)
                    })
                    .collect();
                let mut text = serde_json::to_string_pretty(&rows).expect("plain values");
                text.push('\n');
                text
            }
        }
    }
}

/// Writes rendered output to the chosen path or standard output.
pub fn emit(table: &Table, format: Format, out: Option<&PathBuf>) -> Result<()> {
    let text = table.render(format);
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}
