//! Rendering for the csv and json output formats.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;

use incidence::report::{ReportEntry, ReproductionReport, Tolerance};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Shortest decimal that round-trips to the same `f64`. Never uses a locale,
/// grouping separators or exponent notation.
pub fn num(v: f64) -> String {
    format!("{v}")
}

fn io_err(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("writing output: {e}"))
}

/// Writes serializable rows as csv (header row, `\n` endings) or a json array.
pub fn records<T: Serialize>(format: Format, rows: &[T]) -> Result<(), Failure> {
    let stdout = io::stdout();
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(stdout.lock());
            for r in rows {
                w.serialize(r).map_err(io_err)?;
            }
            w.flush().map_err(io_err)
        }
        Format::Json => {
            let mut out = stdout.lock();
            serde_json::to_writer_pretty(&mut out, rows).map_err(io_err)?;
            writeln!(out).map_err(io_err)
        }
        Format::Table => unreachable!("callers render tables themselves"),
    }
}

#[derive(Serialize)]
struct EntryRow<'a> {
    section: &'static str,
    label: &'a str,
    computed: f64,
    expected: f64,
    tolerance: f64,
    tolerance_kind: Tolerance,
    pass: bool,
}

fn entry_rows<'a>(
    section: &'static str,
    entries: &'a [ReportEntry],
) -> impl Iterator<Item = EntryRow<'a>> {
    entries.iter().map(move |e| EntryRow {
        section,
        label: &e.label,
        computed: e.computed,
        expected: e.expected,
        tolerance: e.tolerance,
        tolerance_kind: e.tolerance_kind,
        pass: e.pass,
    })
}

#[derive(Serialize)]
struct ReportDocument<'a> {
    reference_version: u32,
    pass: bool,
    entries: &'a [ReportEntry],
    cross_checks: &'a [ReportEntry],
}

pub fn reproduction(format: Format, report: &ReproductionReport) -> Result<(), Failure> {
    match format {
        Format::Table => {
            println!("{report}");
            Ok(())
        }
        Format::Csv => {
            let rows: Vec<EntryRow> = entry_rows("reference", &report.entries)
                .chain(entry_rows("cross_check", &report.cross_checks))
                .collect();
            records(Format::Csv, &rows)
        }
        Format::Json => {
            let doc = ReportDocument {
                reference_version: report.reference_version,
                pass: report.pass(),
                entries: &report.entries,
                cross_checks: &report.cross_checks,
            };
            let mut out = io::stdout().lock();
            serde_json::to_writer_pretty(&mut out, &doc).map_err(io_err)?;
            writeln!(out).map_err(io_err)
        }
    }
}
