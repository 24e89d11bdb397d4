//! Column-oriented output: one builder, two writers (CSV and JSON).
//!
//! Floats are written in Rust's shortest round-trip decimal form, so files
//! are byte-stable across runs and re-parse to the exact same values.

use std::io::{self, Write};

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Str(String),
}

impl Cell {
    fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        match self {
            Cell::Int(v) => write!(w, "{v}"),
            Cell::Float(v) => write!(w, "{v}"),
            Cell::Str(v) => write!(w, "{v}"),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Str(v) => json!(v),
        }
    }
}

/// A dataset to be serialized: resolved-config echo plus rows.
#[derive(Debug, Clone)]
pub struct Table {
    pub command: &'static str,
    /// Resolved configuration, echoed as `#`-comments (CSV) or the config
    /// object (JSON). Worker count is deliberately not part of it.
    pub config: Vec<(&'static str, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Self {
            command,
            config: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn config_entry(&mut self, key: &'static str, value: impl ToString) {
        self.config.push((key, value.to_string()));
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "# fracmap {}", self.command)?;
        for (key, value) in &self.config {
            writeln!(w, "# {key} = {value}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    write!(w, ",")?;
                }
                cell.write_csv(w)?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, w: &mut W) -> io::Result<()> {
        let mut config = Map::new();
        for (key, value) in &self.config {
            // numbers stay numbers in the envelope when they parse cleanly
            let v = if let Ok(i) = value.parse::<i64>() {
                Value::Number(i.into())
            } else if let Some(n) = value
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
            {
                Value::Number(n)
            } else {
                Value::String(value.clone())
            };
            config.insert((*key).to_string(), v);
        }
        let envelope = json!({
            "command": self.command,
            "config": config,
            "columns": self.columns,
            "rows": self.rows.iter()
                .map(|row| row.iter().map(Cell::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        });
        serde_json::to_writer_pretty(&mut *w, &envelope)?;
        writeln!(w)?;
        Ok(())
    }
}
