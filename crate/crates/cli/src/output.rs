use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::{Context, Result};
use rabi_spectra::ModelSpec;
use serde::Serialize;
use serde_json::Value;

use crate::args::{Common, Format};

/// Shortest decimal that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Rows for CSV output and the equivalent JSON payload.
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub data: Value,
}

impl Report {
    pub fn new(columns: &[&'static str], data: impl Serialize) -> Result<Self> {
        Ok(Report {
            columns: columns.to_vec(),
            rows: Vec::new(),
            data: serde_json::to_value(data)?,
        })
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    model: &'a ModelSpec,
    data: &'a Value,
}

pub fn emit(common: &Common, command: &str, model: &ModelSpec, report: &Report) -> Result<()> {
    let mut sink: Box<dyn Write> = match &common.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match common.format {
        Format::Csv => {
            writeln!(sink, "# rabi-spectra {} {command} {model}", env!("CARGO_PKG_VERSION"))?;
            let mut w = csv::Writer::from_writer(&mut sink);
            w.write_record(&report.columns)?;
            for row in &report.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let env = Envelope { command, model, data: &report.data };
            serde_json::to_writer_pretty(&mut sink, &env)?;
            writeln!(sink)?;
        }
    }
    sink.flush()?;
    Ok(())
}
