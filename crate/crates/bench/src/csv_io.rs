//! Versioned CSV tables.
//!
//! Each file starts with a `#schema=<id>` line, followed by a header row and
//! the data. Floats use 17 significant digits so they survive a round trip.

use std::io::{BufRead, Write};

use csv::StringRecord;

use crate::algorithm::SweepRow;
use crate::{BenchError, Result};

pub const SWEEP_SCHEMA: &str = "iqae-bench/sweep-row/v1";

pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| BenchError::Schema(format!("not a number: '{s}'")))
}

pub fn parse_u64(s: &str) -> Result<u64> {
    s.trim()
        .parse()
        .map_err(|_| BenchError::Schema(format!("not an unsigned integer: '{s}'")))
}

fn parse_bool(s: &str) -> Result<bool> {
    match s.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(BenchError::Schema(format!("not a boolean: '{other}'"))),
    }
}

/// Writes the schema line, the header and every record.
pub fn write_table<W, I>(mut out: W, schema: &str, header: &[&str], records: I) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = Vec<String>>,
{
    writeln!(out, "#schema={schema}")?;
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(header)?;
    for record in records {
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads a table written by [`write_table`], checking schema and header.
pub fn read_table<R: BufRead>(mut input: R, schema: &str, header: &[&str]) -> Result<Vec<StringRecord>> {
    let mut first = String::new();
    input.read_line(&mut first)?;
    let found = first.trim_end().strip_prefix("#schema=").unwrap_or("");
    if found != schema {
        return Err(BenchError::Schema(format!(
            "expected schema '{schema}', found '{}'",
            first.trim_end()
        )));
    }
    let mut reader = csv::Reader::from_reader(input);
    let found_header = reader.headers()?.clone();
    if found_header.iter().ne(header.iter().copied()) {
        return Err(BenchError::Schema(format!("unexpected header {found_header:?}")));
    }
    reader.records().map(|r| r.map_err(BenchError::from)).collect()
}

pub fn sweep_record(row: &SweepRow) -> Vec<String> {
    vec![
        row.algorithm.to_string(),
        format_f64(row.a),
        format_f64(row.epsilon),
        format_f64(row.alpha),
        row.seed_index.to_string(),
        row.n_oracle.to_string(),
        format_f64(row.interval_lo),
        format_f64(row.interval_hi),
        row.covered.to_string(),
        format_f64(row.overhead),
        format_f64(row.wall_time),
    ]
}

fn parse_sweep_record(r: &StringRecord) -> Result<SweepRow> {
    if r.len() != SweepRow::HEADER.len() {
        return Err(BenchError::Schema(format!(
            "expected {} fields, got {}",
            SweepRow::HEADER.len(),
            r.len()
        )));
    }
    Ok(SweepRow {
        algorithm: r[0].parse()?,
        a: parse_f64(&r[1])?,
        epsilon: parse_f64(&r[2])?,
        alpha: parse_f64(&r[3])?,
        seed_index: parse_u64(&r[4])?,
        n_oracle: parse_u64(&r[5])?,
        interval_lo: parse_f64(&r[6])?,
        interval_hi: parse_f64(&r[7])?,
        covered: parse_bool(&r[8])?,
        overhead: parse_f64(&r[9])?,
        wall_time: parse_f64(&r[10])?,
    })
}

pub fn write_sweep_rows<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    write_table(out, SWEEP_SCHEMA, &SweepRow::HEADER, rows.iter().map(sweep_record))
}

pub fn read_sweep_rows<R: BufRead>(input: R) -> Result<Vec<SweepRow>> {
    read_table(input, SWEEP_SCHEMA, &SweepRow::HEADER)?
        .iter()
        .map(parse_sweep_record)
        .collect()
}
