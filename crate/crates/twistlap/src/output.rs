//! Output document and its JSON, CSV and table encodings.

use std::io::Write;

use serde::Serialize;
use twistlap_core::eigensolve::Cluster;

use crate::cli::Format;
use crate::error::CliError;

/// Version of the JSON document layout.
pub const SCHEMA_VERSION: u32 = 1;

/// JSON schema of [`Document`].
pub const SCHEMA: &str = include_str!("../schema/output.schema.json");

/// Closed-form value, with multiplicity where it is known.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleValue {
    /// Value.
    pub value: f64,
    /// Multiplicity, if the closed form provides one.
    pub multiplicity: Option<usize>,
}

impl OracleValue {
    pub fn bare(value: f64) -> Self {
        Self { value, multiplicity: None }
    }
}

/// One cell of a tabular rendering.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<Option<i64>> for Cell {
    fn from(v: Option<i64>) -> Self {
        v.map_or(Cell::Empty, Cell::Int)
    }
}

impl From<Option<usize>> for Cell {
    fn from(v: Option<usize>) -> Self {
        v.map_or(Cell::Empty, |x| Cell::Int(x as i64))
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn display(&self) -> String {
        match self {
            Cell::Float(v) => format!("{v:.10e}"),
            other => other.csv(),
        }
    }
}

/// Header plus rows, used for the CSV and table encodings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// The document every subcommand produces.
#[derive(Debug, Clone, Serialize)]
pub struct Document {
    pub schema_version: u32,
    pub command: &'static str,
    pub params: serde_json::Value,
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub clusters: Vec<Cluster>,
    pub oracle: Vec<OracleValue>,
    pub report: serde_json::Value,
    /// Tabular view for CSV and table output.
    #[serde(skip)]
    pub table: Table,
    /// Summary lines appended to the table output.
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl Document {
    pub fn new(command: &'static str, params: impl Serialize) -> Result<Self, CliError> {
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            command,
            params: to_value(params)?,
            eigenvalues: Vec::new(),
            residuals: Vec::new(),
            clusters: Vec::new(),
            oracle: Vec::new(),
            report: serde_json::Value::Object(Default::default()),
            table: Table::default(),
            notes: Vec::new(),
        })
    }

    /// Encodes the document in `format`.
    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(self).map_err(|e| CliError::Io(e.into()))?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.table.header).map_err(csv_error)?;
                for row in &self.table.rows {
                    w.write_record(row.iter().map(Cell::csv)).map_err(csv_error)?;
                }
                w.into_inner().map_err(|e| CliError::Io(e.into_error()))
            }
            Format::Table => Ok(self.render_table().into_bytes()),
        }
    }

    fn render_table(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .table
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::display).collect())
            .collect();
        let widths: Vec<usize> = self
            .table
            .header
            .iter()
            .enumerate()
            .map(|(i, h)| cells.iter().map(|r| r[i].len()).chain([h.len()]).max().unwrap_or(0))
            .collect();
        let line = |fields: Vec<&str>| {
            fields
                .iter()
                .zip(&widths)
                .map(|(f, w)| format!("{f:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_owned()
        };
        let mut out = String::new();
        out.push_str(&line(self.table.header.clone()));
        out.push('\n');
        for r in &cells {
            out.push_str(&line(r.iter().map(String::as_str).collect()));
            out.push('\n');
        }
        for n in &self.notes {
            out.push_str(n);
            out.push('\n');
        }
        out
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

/// Serializes any report value.
pub fn to_value(v: impl Serialize) -> Result<serde_json::Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Io(e.into()))
}

/// Writes `bytes` to `path`, or to standard output.
pub fn emit(bytes: &[u8], path: Option<&std::path::Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(CliError::Io),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}
