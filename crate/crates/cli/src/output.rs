//! Output files with a metadata header: artifact version, spec hash and seed.
//!
//! Floats are written in Rust's shortest round-trip form, so output
//! is locale independent and reruns are byte-identical.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::spec::Command;
use crate::Failure;

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub artifact: &'static str,
    pub version: &'static str,
    pub spec_sha256: String,
    pub seed: Option<u64>,
    pub spec: serde_json::Value,
}

impl Meta {
    pub fn for_command(cmd: &Command) -> Result<Self, Failure> {
        let spec = serde_json::to_value(cmd).map_err(|e| Failure::Runtime(e.to_string()))?;
        let canonical = serde_json::to_string(&spec).map_err(|e| Failure::Runtime(e.to_string()))?;
        let digest = Sha256::digest(canonical.as_bytes());
        Ok(Self {
            artifact: "heatlab",
            version: env!("CARGO_PKG_VERSION"),
            spec_sha256: format!("{digest:x}"),
            seed: cmd.seed(),
            spec,
        })
    }

    fn csv_header(&self) -> String {
        let seed = self.seed.map_or("none".to_string(), |s| s.to_string());
        format!(
            "# {} {}\n# spec_sha256 {}\n# seed {seed}\n# spec {}\n",
            self.artifact, self.version, self.spec_sha256, self.spec
        )
    }
}

/// Rows of optional floats and strings, written as CSV under the metadata header.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:?}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Num(x) => serde_json::json!(x),
            Cell::Text(s) => serde_json::json!(s),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn write_table(meta: &Meta, table: &Table, path: Option<&Path>) -> Result<(), Failure> {
    let mut w = sink(path)?;
    w.write_all(meta.csv_header().as_bytes())?;
    let mut csv = csv::Writer::from_writer(w);
    let err = |e: csv::Error| Failure::Runtime(e.to_string());
    csv.write_record(&table.columns).map_err(err)?;
    for row in &table.rows {
        csv.write_record(row.iter().map(Cell::render)).map_err(err)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn table_json(table: &Table) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = table
        .rows
        .iter()
        .map(|r| {
            let obj: serde_json::Map<String, serde_json::Value> = table
                .columns
                .iter()
                .zip(r)
                .map(|(c, v)| (c.to_string(), v.json()))
                .collect();
            serde_json::Value::Object(obj)
        })
        .collect();
    serde_json::Value::Array(rows)
}

pub fn write_json<T: Serialize>(meta: &Meta, result: &T, path: Option<&Path>) -> Result<(), Failure> {
    let doc = serde_json::json!({ "meta": meta, "result": result });
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| Failure::Runtime(e.to_string()))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}
