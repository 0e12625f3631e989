//! Result tables, CSV emission and `.meta` sidecars.

use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    /// Floats use 12 significant digits in scientific notation.
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) if v.is_finite() => format!("{v:.11e}"),
            Cell::Float(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Prefix every row with a constant column.
    pub fn with_leading(mut self, name: &str, value: Cell) -> Self {
        self.header.insert(0, name.to_string());
        for row in &mut self.rows {
            row.insert(0, value.clone());
        }
        self
    }

    /// Append `other`'s rows; headers must match.
    pub fn extend(&mut self, other: Table) -> Result<(), CliError> {
        if self.header != other.header {
            return Err(CliError::Output("tables with different columns cannot be joined".into()));
        }
        self.rows.extend(other.rows);
        Ok(())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .quote_style(csv::QuoteStyle::Necessary)
            .from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Output(e.to_string());
        w.write_record(&self.header).map_err(err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(err)?;
        }
        w.into_inner().map_err(|e| CliError::Output(e.to_string()))
    }
}

pub fn emit_csv(table: &Table, path: &Path) -> Result<(), CliError> {
    if table.rows.is_empty() {
        return Err(CliError::Output("refusing to write an empty table".into()));
    }
    write_file(path, &table.to_csv()?)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| CliError::Output(format!("cannot write {}: {e}", path.display())))?;
    f.write_all(bytes)
        .map_err(|e| CliError::Output(format!("cannot write {}: {e}", path.display())))
}

pub fn meta_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("meta")
}

pub fn config_hash(canonical: &str) -> String {
    Sha256::digest(canonical.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// `key=value` sidecar describing how a CSV was produced.
pub fn emit_meta(csv_path: &Path, entries: &[(&str, String)]) -> Result<PathBuf, CliError> {
    let path = meta_path(csv_path);
    let text: String = entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect();
    write_file(&path, text.as_bytes())?;
    Ok(path)
}
