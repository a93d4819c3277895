use std::fmt;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A rectangular result that can also be written as CSV.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
    /// Format used when `--format` is not given.
    pub default_format: Format,
}

impl Report {
    pub fn json(json: Value) -> Self {
        Report { json, table: None, default_format: Format::Json }
    }

    pub fn with_table(json: Value, table: Table) -> Self {
        Report { json, table: Some(table), default_format: Format::Json }
    }

    pub fn csv_first(json: Value, table: Table) -> Self {
        Report { json, table: Some(table), default_format: Format::Csv }
    }
}

/// Why a command did not succeed. `Domain` maps to exit status 1, `Usage`
/// to 2.
#[derive(Debug)]
pub enum Failure {
    Domain { reason: String, detail: Value },
    Usage(String),
}

impl Failure {
    pub fn domain(reason: impl fmt::Display) -> Self {
        Failure::Domain { reason: reason.to_string(), detail: Value::Null }
    }

    pub fn with_detail(reason: impl fmt::Display, detail: Value) -> Self {
        Failure::Domain { reason: reason.to_string(), detail }
    }

    pub fn usage(reason: impl fmt::Display) -> Self {
        Failure::Usage(reason.to_string())
    }
}

/// Converts anything serializable into a JSON value. Objects come out with
/// sorted keys because `serde_json::Map` is ordered.
pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("values serialize to JSON")
}

pub fn render(report: &Report, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(format!("{}\n", report.json)),
        Format::Csv => {
            let table = report
                .table
                .as_ref()
                .ok_or_else(|| Failure::usage("this subcommand has no CSV output"))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.header).map_err(Failure::domain)?;
            for row in &table.rows {
                w.write_record(row).map_err(Failure::domain)?;
            }
            let bytes = w.into_inner().map_err(Failure::domain)?;
            String::from_utf8(bytes).map_err(Failure::domain)
        }
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

/// JSON printed for a domain failure: the reason plus any detail fields.
pub fn failure_json(reason: &str, detail: &Value) -> Value {
    let mut map = match detail {
        Value::Object(m) => m.clone(),
        Value::Null => Map::new(),
        other => {
            let mut m = Map::new();
            m.insert("detail".into(), other.clone());
            m
        }
    };
    map.insert("ok".into(), Value::Bool(false));
    map.insert("reason".into(), Value::String(reason.to_string()));
    Value::Object(map)
}
