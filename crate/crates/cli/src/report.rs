//! Report envelope, JSON encodings of algebraic values, and CSV tables.

use serde::Serialize;
use serde_json::Value;

use scatterlab::scatter::Witness;
use scatterlab::{Elem, Field, Matrix};

use crate::config::RunConfig;

pub const TOOL: &str = "scatterlab";

/// Common wrapper around every JSON report.
#[derive(Debug, Serialize)]
pub struct Envelope<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: RunConfig,
    pub result: &'a Value,
    pub elapsed_ms: u64,
}

impl<'a> Envelope<'a> {
    pub fn new(config: &RunConfig, result: &'a Value, elapsed_ms: u64) -> Envelope<'a> {
        Envelope {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            command: config.command.name(),
            config: config.reported(),
            result,
            elapsed_ms,
        }
    }
}

/// A flat table for CSV output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Table {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

/// Element tuple.
pub fn elem(field: &Field, a: Elem) -> Vec<u32> {
    field.digits(a)
}

/// Compact tuple text for CSV cells, e.g. `[1,0,1]`.
pub fn elem_text(field: &Field, a: Elem) -> String {
    let ds: Vec<String> = field.digits(a).iter().map(u32::to_string).collect();
    format!("[{}]", ds.join(","))
}

/// Row-major nested arrays of element tuples.
pub fn matrix(m: &Matrix) -> Vec<Vec<Vec<u32>>> {
    let f = m.field();
    m.to_rows().iter().map(|r| r.iter().map(|&a| f.digits(a)).collect()).collect()
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessJson {
    Pair { y: Vec<u32>, z: Vec<u32>, m: Vec<u32> },
    Kernel { m: Vec<u32>, vectors: [Vec<u32>; 2] },
}

pub fn witness(field: &Field, w: &Witness) -> WitnessJson {
    match *w {
        Witness::Pair { y, z, m } => WitnessJson::Pair { y: elem(field, y), z: elem(field, z), m: elem(field, m) },
        Witness::Kernel { m, vectors: [a, b] } => {
            WitnessJson::Kernel { m: elem(field, m), vectors: [elem(field, a), elem(field, b)] }
        }
    }
}
