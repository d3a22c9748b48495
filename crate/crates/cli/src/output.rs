//! CSV and JSON emission.

use std::io::Write;
use std::path::Path;

use crate::config::Format;
use crate::error::{CliError, Result};
use crate::experiments::{ExperimentRecord, Report};

pub const CSV_HEADER: [&str; 6] = ["n", "size", "value", "reference", "abs_error", "wall_ms"];

/// Header line plus one line per record.
pub fn write_csv<W: Write>(records: &[ExperimentRecord], w: W) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    let err = |e: csv::Error| CliError::Report(e.to_string());
    out.write_record(CSV_HEADER).map_err(err)?;
    for r in records {
        out.serialize(r).map_err(err)?;
    }
    out.flush().map_err(|e| CliError::Report(e.to_string()))
}

pub fn write_json<W: Write>(report: &Report, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, report).map_err(|e| CliError::Report(e.to_string()))?;
    writeln!(w).map_err(|e| CliError::Report(e.to_string()))
}

pub fn emit<W: Write>(report: &Report, format: Format, w: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(&report.records, w),
        Format::Json => write_json(report, w),
    }
}

pub fn emit_to_path(report: &Report, format: Format, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    emit(report, format, std::io::BufWriter::new(file))
}

pub fn read_json(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(|e| CliError::Report(e.to_string()))
}

pub fn read_csv(text: &str) -> Result<Vec<ExperimentRecord>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rd.headers().map_err(|e| CliError::Report(e.to_string()))?.iter().map(String::from).collect();
    if header != CSV_HEADER {
        return Err(CliError::Report(format!("unexpected header {header:?}")));
    }
    rd.deserialize().map(|r| r.map_err(|e| CliError::Report(e.to_string()))).collect()
}
