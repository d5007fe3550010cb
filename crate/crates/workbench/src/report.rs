//! Report tables. Both formats open with a version line so readers can
//! reject files they do not understand.
//!
//! CSV starts with `# gmco report v1` (or `# gmco eval v1`), then a header
//! row. JSON lines start with `{"format":"gmco-report","version":1}`, then
//! one object per row.

use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::experiment::RunReport;
use crate::{Result, WorkbenchError};

pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    JsonLines,
}

impl FromStr for Format {
    type Err = WorkbenchError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "jsonlines" | "jsonl" => Ok(Format::JsonLines),
            _ => Err(WorkbenchError::Config(format!("unknown format `{s}` (csv or jsonlines)"))),
        }
    }
}

/// Run report row as written to disk; the result ids stay out of tables.
#[derive(Serialize)]
struct RunRow<'a> {
    algorithm: &'a str,
    dataset: &'a str,
    seed: Option<u64>,
    objects: usize,
    users: usize,
    attributes: usize,
    params: &'a str,
    io_reads: u64,
    dominance_checks: u64,
    result_size: usize,
    wall_time_ms: f64,
}

impl<'a> From<&'a RunReport> for RunRow<'a> {
    fn from(r: &'a RunReport) -> Self {
        RunRow {
            algorithm: &r.algorithm,
            dataset: &r.dataset,
            seed: r.seed,
            objects: r.objects,
            users: r.users,
            attributes: r.attributes,
            params: &r.params,
            io_reads: r.io_reads,
            dominance_checks: r.dominance_checks,
            result_size: r.result_size,
            wall_time_ms: (r.wall_time_ms * 1e3).round() / 1e3,
        }
    }
}

/// One row of an evaluation table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalRow {
    pub strategy: String,
    pub group_size: usize,
    pub k: usize,
    pub precision: f64,
    /// Empty when no list could be compared.
    pub footrule: Option<f64>,
}

fn write_table<W: Write, R: Serialize>(w: W, fmt: Format, kind: &str, rows: impl IntoIterator<Item = R>) -> Result<()> {
    let err = |e: &dyn std::fmt::Display| WorkbenchError::Config(format!("writing report: {e}"));
    let mut w = w;
    match fmt {
        Format::Csv => {
            writeln!(w, "# gmco {kind} v{VERSION}").map_err(|e| err(&e))?;
            let mut c = csv::Writer::from_writer(w);
            for r in rows {
                c.serialize(r).map_err(|e| err(&e))?;
            }
            c.flush().map_err(|e| err(&e))?;
        }
        Format::JsonLines => {
            writeln!(w, "{{\"format\":\"gmco-{kind}\",\"version\":{VERSION}}}").map_err(|e| err(&e))?;
            for r in rows {
                serde_json::to_writer(&mut w, &r).map_err(|e| err(&e))?;
                writeln!(w).map_err(|e| err(&e))?;
            }
        }
    }
    Ok(())
}

pub fn write_runs<W: Write>(w: W, fmt: Format, reports: &[RunReport]) -> Result<()> {
    write_table(w, fmt, "report", reports.iter().map(RunRow::from))
}

pub fn write_eval<W: Write>(w: W, fmt: Format, rows: &[EvalRow]) -> Result<()> {
    write_table(w, fmt, "eval", rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report() -> RunReport {
        RunReport {
            algorithm: "ind".into(),
            dataset: "x".into(),
            seed: Some(3),
            objects: 4,
            users: 3,
            attributes: 5,
            params: "percent=60".into(),
            io_reads: 3,
            dominance_checks: 9,
            result_size: 2,
            wall_time_ms: 0.5,
            result: vec!["o1".into()],
        }
    }

    #[test]
    fn csv_has_version_and_header() {
        let mut out = Vec::new();
        write_runs(&mut out, Format::Csv, &[report()]).unwrap();
        let s = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "# gmco report v1");
        assert!(lines[1].starts_with("algorithm,dataset,seed,"));
        assert_eq!(lines[2], "ind,x,3,4,3,5,percent=60,3,9,2,0.5");
    }

    #[test]
    fn jsonlines_rows_parse() {
        let mut out = Vec::new();
        write_eval(
            &mut out,
            Format::JsonLines,
            &[EvalRow {
                strategy: "ADD".into(),
                group_size: 2,
                k: 5,
                precision: 0.4,
                footrule: None,
            }],
        )
        .unwrap();
        let s = String::from_utf8(out).unwrap();
        let mut it = s.lines();
        let head: serde_json::Value = serde_json::from_str(it.next().unwrap()).unwrap();
        assert_eq!(head["version"], 1);
        let row: serde_json::Value = serde_json::from_str(it.next().unwrap()).unwrap();
        assert_eq!(row["strategy"], "ADD");
        assert!(row["footrule"].is_null());
    }

    #[test]
    fn formats_parse() {
        assert_eq!("JSONLINES".parse::<Format>().unwrap(), Format::JsonLines);
        assert!("xml".parse::<Format>().is_err());
    }
}
