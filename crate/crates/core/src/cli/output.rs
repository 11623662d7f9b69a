use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use super::{CliError, Format};
use crate::aoi_metrics::MetricValue;

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Divergent,
    Int(u64),
    Bool(bool),
    Text(String),
}

impl From<MetricValue> for Cell {
    fn from(v: MetricValue) -> Self {
        match v {
            MetricValue::Finite(x) => Cell::Num(x),
            MetricValue::Divergent => Cell::Divergent,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl Cell {
    /// Numbers carry 17 significant digits so they re-parse exactly.
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Divergent => "divergent".into(),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => Value::from(*x),
            Cell::Divergent => Value::from("divergent"),
            Cell::Int(n) => Value::from(*n),
            Cell::Bool(b) => Value::from(*b),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn json_rows(&self) -> Vec<Value> {
        self.rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(r.iter().map(Cell::json))
                    .collect();
                Value::Object(obj)
            })
            .collect()
    }

    /// CSV with a header line, or JSON: a single object for one-row
    /// tables when `single` is set, an array of row objects otherwise.
    pub fn render(&self, format: Format, single: bool) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns).map_err(CliError::io)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(Cell::csv)).map_err(CliError::io)?;
                }
                w.into_inner().map_err(|e| CliError::runtime(e.to_string()))
            }
            Format::Json => {
                let mut rows = self.json_rows();
                let v = if single && rows.len() == 1 {
                    rows.remove(0)
                } else {
                    Value::Array(rows)
                };
                let mut out = serde_json::to_vec_pretty(&v).map_err(|e| CliError::runtime(e.to_string()))?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }
}

/// Everything needed to repeat a run, written next to the output file.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub config_path: String,
    pub output_path: Option<String>,
    pub seed: Option<u64>,
    pub format: Format,
    pub oracle: Option<&'static str>,
    pub normalize: bool,
    pub tool_version: &'static str,
    pub timestamp_unix_s: u64,
    /// The configuration as parsed.
    pub config: Value,
}

pub fn manifest_path(out: &Path) -> std::path::PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    s.into()
}

/// Writes `data` to `out` and the manifest beside it, or `data` to
/// `stdout` when there is no output path.
pub fn emit(
    data: &[u8],
    out: Option<&Path>,
    manifest: &RunManifest,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, data).map_err(CliError::io)?;
            let mut m = serde_json::to_vec_pretty(manifest).map_err(|e| CliError::runtime(e.to_string()))?;
            m.push(b'\n');
            std::fs::write(manifest_path(path), m).map_err(CliError::io)
        }
        None => stdout.write_all(data).map_err(CliError::io),
    }
}
