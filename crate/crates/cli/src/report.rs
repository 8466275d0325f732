use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::Format;

pub const SCHEMA_VERSION: &str = "1";

/// Rows of numbers or labels with a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => x.to_string(),
            Cell::Int(x) => x.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// What an experiment hands back before it is wrapped in a report.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub results: Value,
    /// Curve data for csv output; `None` falls back to flattened results.
    pub table: Option<Table>,
    pub default_format: Format,
    /// Effective repetition count, if the experiment samples.
    pub shots: Option<u64>,
    /// Effective Fock cutoff, if the experiment truncates.
    pub cutoff: Option<u32>,
    pub truncation_residual: Option<f64>,
}

impl Outcome {
    pub fn json(results: Value) -> Self {
        Self {
            results,
            table: None,
            default_format: Format::Json,
            shots: None,
            cutoff: None,
            truncation_residual: None,
        }
    }

    pub fn curve(results: Value, table: Table) -> Self {
        Self {
            table: Some(table),
            default_format: Format::Csv,
            ..Self::json(results)
        }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn with_shots(mut self, shots: u64) -> Self {
        self.shots = Some(shots);
        self
    }

    pub fn with_cutoff(mut self, cutoff: u32, residual: f64) -> Self {
        self.cutoff = Some(cutoff);
        self.truncation_residual = Some(residual);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub seed: u64,
    pub shots: Option<u64>,
    pub cutoff: Option<u32>,
    pub params: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub schema_version: &'static str,
    pub experiment: String,
    pub config: ConfigEcho,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// `key,value` rows for every scalar leaf, with dotted paths.
pub fn flatten(results: &Value) -> Table {
    fn walk(prefix: &str, v: &Value, table: &mut Table) {
        match v {
            Value::Object(map) => walk_map(prefix, map, table),
            Value::Array(items) => {
                for (i, item) in items.iter().enumerate() {
                    walk(&join(prefix, &i.to_string()), item, table);
                }
            }
            Value::Null => table.push(vec![prefix.into(), "".into()]),
            Value::Bool(b) => table.push(vec![prefix.into(), b.to_string().into()]),
            Value::Number(n) => table.push(vec![prefix.into(), n.to_string().into()]),
            Value::String(s) => table.push(vec![prefix.into(), s.clone().into()]),
        }
    }
    fn walk_map(prefix: &str, map: &Map<String, Value>, table: &mut Table) {
        for (k, v) in map {
            walk(&join(prefix, k), v, table);
        }
    }
    fn join(prefix: &str, key: &str) -> String {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    }
    let mut table = Table::new(vec!["key", "value"]);
    walk("", results, &mut table);
    table
}
