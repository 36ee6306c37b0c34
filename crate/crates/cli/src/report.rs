use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::args::Format;
use crate::error::{io_error, CliError, Result};

/// Rows of plot-ready data; emitted as CSV with `--format csv`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub version: &'static str,
    pub params: Value,
    /// SHA-256 of every file read, by path.
    pub inputs: BTreeMap<String, String>,
    /// SHA-256 of every file written, by path.
    pub outputs: BTreeMap<String, String>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    pub timing_ms: f64,
}

/// Collects file digests while a command runs.
#[derive(Debug, Default)]
pub struct Files {
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
}

pub fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

impl Files {
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path).map_err(io_error(path))?;
        self.inputs.insert(path.display().to_string(), digest(text.as_bytes()));
        Ok(text)
    }

    pub fn write(&mut self, path: &Path, text: &str) -> Result<()> {
        std::fs::write(path, text).map_err(io_error(path))?;
        self.outputs.insert(path.display().to_string(), digest(text.as_bytes()));
        Ok(())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

impl Report {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                match &self.table {
                    Some(t) => {
                        w.write_record(&t.columns)?;
                        for row in &t.rows {
                            w.write_record(row.iter().map(cell))?;
                        }
                    }
                    None => {
                        w.write_record(["key", "value"])?;
                        if let Value::Object(map) = &self.result {
                            for (k, v) in map {
                                w.write_record([k.clone(), cell(v)])?;
                            }
                        }
                    }
                }
                let bytes = w.into_inner().map_err(|e| CliError::Io { path: "<csv>".into(), source: e.into_error() })?;
                Ok(String::from_utf8(bytes).expect("csv is utf-8"))
            }
        }
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<()> {
        let text = self.render(format)?;
        match out {
            Some(path) => std::fs::write(path, text).map_err(io_error(path)),
            None => std::io::stdout().write_all(text.as_bytes()).map_err(io_error("<stdout>")),
        }
    }
}
