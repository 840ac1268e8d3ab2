use std::io::{self, Write};

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

/// How a command ended, mapped to the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
    Counterexample,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailed => 3,
            Status::Counterexample => 4,
        }
    }
}

/// The rows shared by every output format.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// The rows as JSON objects keyed by column name.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    let obj: Map<String, Value> =
                        self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), Value::String(v.clone()))).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

pub struct Report {
    pub results: Value,
    pub summary: Vec<(&'static str, String)>,
    pub table: Table,
    pub status: Status,
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    parameters: &'a Map<String, Value>,
    results: &'a Value,
    rows: Value,
    timing_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

pub struct Rendered<'a> {
    pub command: &'a str,
    pub parameters: Map<String, Value>,
    pub report: &'a Report,
    pub timing_ms: u128,
    pub seed: Option<u64>,
}

impl Rendered<'_> {
    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Json => self.json(out),
            Format::Csv => self.csv(out),
            Format::Plain => self.plain(out),
        }
    }

    fn json(&self, out: &mut impl Write) -> io::Result<()> {
        let env = Envelope {
            command: self.command,
            parameters: &self.parameters,
            results: &self.report.results,
            rows: self.report.table.to_json(),
            timing_ms: self.timing_ms,
            seed: self.seed,
        };
        serde_json::to_writer_pretty(&mut *out, &env)?;
        writeln!(out)
    }

    fn csv(&self, out: &mut impl Write) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.report.table.columns)?;
        for r in &self.report.table.rows {
            w.write_record(r)?;
        }
        w.flush()
    }

    fn plain(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "{}", self.command)?;
        for (k, v) in &self.parameters {
            writeln!(out, "  {k} = {}", scalar(v))?;
        }
        for (k, v) in &self.report.summary {
            writeln!(out, "{k}: {v}")?;
        }
        let t = &self.report.table;
        if !t.columns.is_empty() {
            let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
            for r in &t.rows {
                for (w, cell) in widths.iter_mut().zip(r) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: &mut dyn Iterator<Item = &str>| {
                cells.zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ")
            };
            writeln!(out)?;
            writeln!(out, "{}", line(&mut t.columns.iter().copied()))?;
            for r in &t.rows {
                writeln!(out, "{}", line(&mut r.iter().map(String::as_str)))?;
            }
        }
        if let Some(seed) = self.seed {
            writeln!(out, "seed: {seed}")?;
        }
        writeln!(out, "time: {} ms", self.timing_ms)
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
