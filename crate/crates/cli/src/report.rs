use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Seventeen significant digits, so values round-trip exactly.
pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn ser_num<S: Serializer>(v: f64, s: S) -> Result<S::Ok, S::Error> {
    if !v.is_finite() {
        return s.serialize_none();
    }
    RawValue::from_string(fmt_num(v))
        .map_err(serde::ser::Error::custom)?
        .serialize(s)
}

fn ser_f64<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    ser_num(*v, s)
}

fn ser_opt<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => ser_num(*x, s),
        None => s.serialize_none(),
    }
}

struct Num(f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ser_num(self.0, s)
    }
}

#[derive(Debug, Clone)]
pub enum Param {
    Num(f64),
    List(Vec<f64>),
    Int(usize),
    Text(String),
}

impl Serialize for Param {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Param::Num(v) => ser_num(*v, s),
            Param::Int(v) => s.serialize_u64(*v as u64),
            Param::Text(v) => s.serialize_str(v),
            Param::List(v) => {
                let mut seq = s.serialize_seq(Some(v.len()))?;
                for x in v {
                    seq.serialize_element(&Num(*x))?;
                }
                seq.end()
            }
        }
    }
}

/// One reported number and the library operation that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct Measurement {
    pub name: String,
    #[serde(serialize_with = "ser_f64")]
    pub value: f64,
    #[serde(serialize_with = "ser_opt", skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    #[serde(serialize_with = "ser_opt")]
    pub tolerance: Option<f64>,
    pub pass: bool,
    pub operation: &'static str,
}

impl Measurement {
    /// Informational value, no tolerance attached.
    pub fn info(name: impl Into<String>, value: f64, operation: &'static str) -> Self {
        Self { name: name.into(), value, expected: None, tolerance: None, pass: true, operation }
    }

    /// Passes when `value ≤ tolerance`.
    pub fn bound(name: impl Into<String>, value: f64, tolerance: f64, operation: &'static str) -> Self {
        Self {
            name: name.into(),
            value,
            expected: None,
            tolerance: Some(tolerance),
            pass: value <= tolerance,
            operation,
        }
    }

    /// Passes when `|value − expected| ≤ tolerance`.
    pub fn close(
        name: impl Into<String>,
        value: f64,
        expected: f64,
        tolerance: f64,
        operation: &'static str,
    ) -> Self {
        Self {
            name: name.into(),
            value,
            expected: Some(expected),
            tolerance: Some(tolerance),
            pass: (value - expected).abs() <= tolerance,
            operation,
        }
    }

    /// Passes when `|value/expected − 1| ≤ tolerance`.
    pub fn relative(
        name: impl Into<String>,
        value: f64,
        expected: f64,
        tolerance: f64,
        operation: &'static str,
    ) -> Self {
        Self {
            pass: (value / expected - 1.0).abs() <= tolerance,
            ..Self::close(name, value, expected, tolerance, operation)
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub params: BTreeMap<&'static str, Param>,
    pub results: Vec<Measurement>,
    pub version: &'static str,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self { command, params: BTreeMap::new(), results: Vec::new(), version: VERSION }
    }

    pub fn param(&mut self, key: &'static str, value: Param) {
        self.params.insert(key, value);
    }

    pub fn push(&mut self, m: Measurement) {
        self.results.push(m);
    }

    pub fn failures(&self) -> Vec<String> {
        self.results.iter().filter(|m| !m.pass).map(|m| m.name.clone()).collect()
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        serde_json::to_string_pretty(self)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| CliError::numeric(format!("serializing report: {e}")))
    }
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Empty,
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, header: &[&'static str]) -> Self {
        Self { name, header: header.to_vec(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let io = |e: csv::Error| CliError::numeric(format!("writing {}: {e}", self.name));
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|c| match c {
                Cell::Num(v) => fmt_num(*v),
                Cell::Int(v) => v.to_string(),
                Cell::Empty => String::new(),
            }))
            .map_err(io)?;
        }
        w.flush().map_err(|e| CliError::numeric(format!("writing {}: {e}", self.name)))
    }
}

/// What a subcommand hands back: the report, its tables, and which table goes to stdout.
pub struct Outcome {
    pub report: Report,
    pub tables: Vec<Table>,
    pub primary: usize,
}

pub fn write_artifacts(dir: &Path, outcome: &Outcome) -> Result<(), CliError> {
    let io = |what: &str, e: std::io::Error| CliError::numeric(format!("{what}: {e}"));
    fs::create_dir_all(dir).map_err(|e| io(&format!("creating {}", dir.display()), e))?;
    fs::write(dir.join("report.json"), outcome.report.to_json()?)
        .map_err(|e| io("writing report.json", e))?;
    for t in &outcome.tables {
        let path = dir.join(format!("{}.csv", t.name));
        let f = fs::File::create(&path).map_err(|e| io(&format!("creating {}", path.display()), e))?;
        t.write_csv(std::io::BufWriter::new(f))?;
    }
    Ok(())
}
