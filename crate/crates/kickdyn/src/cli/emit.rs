//! Result emission: CSV for plotting, JSON for metadata-rich archival.
//!
//! Numbers are printed with 12 significant digits everywhere, enough to carry
//! the crate's 1e−10 comparison tolerances through a round-trip. Output files
//! are fully rewritten, never appended.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::experiments::{ComparisonReport, ContourResult, TimeseriesRun};

use super::OutputFormat;

/// 12-significant-digit rendering used for every number in text output.
pub fn fmt12(x: f64) -> String {
    format!("{:.11e}", x)
}

/// Round to the value that `fmt12` prints, so JSON numbers round-trip
/// bit-exactly at 12 significant digits.
fn round12(x: f64) -> f64 {
    if x.is_finite() {
        fmt12(x).parse().expect("formatted float parses")
    } else {
        x
    }
}

fn round_numbers(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Number(n) => {
            if let Some(x) = n.as_f64() {
                if n.is_f64() {
                    if let Some(rounded) = serde_json::Number::from_f64(round12(x)) {
                        *n = rounded;
                    }
                }
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_numbers),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

fn to_rounded_json<T: Serialize>(value: &T) -> serde_json::Value {
    let mut v = serde_json::to_value(value).expect("serializable result");
    round_numbers(&mut v);
    v
}

fn timeseries_csv(run: &TimeseriesRun, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "t,C")?;
    for (t, c) in run.series.times.iter().zip(run.series.values.iter()) {
        writeln!(out, "{},{}", fmt12(*t), fmt12(*c))?;
    }
    Ok(())
}

/// Contour CSV: first row is the time axis behind a corner label, each data
/// row starts with its ratio value.
fn contour_csv(grid: &ContourResult, out: &mut dyn Write) -> std::io::Result<()> {
    let header: Vec<String> = std::iter::once("ratio".to_string())
        .chain(grid.times.iter().map(|t| fmt12(*t)))
        .collect();
    writeln!(out, "{}", header.join(","))?;
    for (ratio, row) in grid.ratios.iter().zip(grid.rows.iter()) {
        let line: Vec<String> = std::iter::once(fmt12(*ratio))
            .chain(row.iter().map(|c| fmt12(*c)))
            .collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

fn comparison_csv(report: &ComparisonReport, out: &mut dyn Write) -> std::io::Result<()> {
    let mut header = vec!["t".to_string(), "C".to_string()];
    for name in report.methods.iter().skip(1) {
        header.push(format!("C_{}", name.replace('-', "")));
    }
    if report.methods.len() == 2 {
        header.push("diff".to_string());
    } else {
        for name in report.methods.iter().skip(1) {
            header.push(format!("diff_{}", name.replace('-', "")));
        }
    }
    writeln!(out, "{}", header.join(","))?;
    for (k, t) in report.times.iter().enumerate() {
        let mut row = vec![fmt12(*t), fmt12(report.series[0][k])];
        for series in report.series.iter().skip(1) {
            row.push(fmt12(series[k]));
        }
        for diff in &report.concurrence_diff {
            row.push(fmt12(diff[k]));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

fn json_out<T: Serialize>(kind: &str, value: &T, out: &mut dyn Write) -> std::io::Result<()> {
    let body = serde_json::json!({ "kind": kind, "result": to_rounded_json(value) });
    writeln!(out, "{}", serde_json::to_string_pretty(&body).expect("json encodes"))
}

/// Anything the CLI knows how to emit.
pub enum Emittable<'a> {
    Timeseries(&'a TimeseriesRun),
    Contour(&'a ContourResult),
    Comparison(&'a ComparisonReport),
}

impl Emittable<'_> {
    fn kind(&self) -> &'static str {
        match self {
            Emittable::Timeseries(_) => "timeseries",
            Emittable::Contour(_) => "contour",
            Emittable::Comparison(_) => "comparison",
        }
    }
}

/// Write a result to `path` (or stdout when `None`) in the requested format.
pub fn emit(
    result: &Emittable<'_>,
    format: OutputFormat,
    path: Option<&Path>,
) -> std::io::Result<()> {
    match path {
        Some(path) => {
            let file = std::fs::File::create(path)?;
            let mut buffered = std::io::BufWriter::new(file);
            emit_to(result, format, &mut buffered)?;
            buffered.flush()
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            emit_to(result, format, &mut lock)
        }
    }
}

pub fn emit_to(
    result: &Emittable<'_>,
    format: OutputFormat,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    match (format, result) {
        (OutputFormat::Csv, Emittable::Timeseries(run)) => timeseries_csv(run, out),
        (OutputFormat::Csv, Emittable::Contour(grid)) => contour_csv(grid, out),
        (OutputFormat::Csv, Emittable::Comparison(report)) => comparison_csv(report, out),
        (OutputFormat::Json, _) => match result {
            Emittable::Timeseries(run) => json_out(result.kind(), run, out),
            Emittable::Contour(grid) => json_out(result.kind(), grid, out),
            Emittable::Comparison(report) => json_out(result.kind(), report, out),
        },
    }
}
