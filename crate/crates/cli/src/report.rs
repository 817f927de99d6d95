use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("report `{0}` has no rows")]
    Empty(String),
    #[error("row {row} of `{name}` has {found} fields, header has {expected}")]
    Ragged {
        name: String,
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("writing `{path}`: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// One table plus human-readable summary lines.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: Vec<String>,
}

impl Report {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }
}

/// Formats a float with enough digits to round-trip, so reruns are
/// byte-identical.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

/// Writes `<name>.csv` and `<name>.txt` under `dir` and returns their paths.
/// Nothing is written when the report is empty or malformed.
pub fn emit_report(dir: &Path, report: &Report) -> Result<Vec<PathBuf>, ReportError> {
    if report.rows.is_empty() {
        return Err(ReportError::Empty(report.name.clone()));
    }
    if let Some((row, r)) = report.rows.iter().enumerate().find(|(_, r)| r.len() != report.header.len()) {
        return Err(ReportError::Ragged {
            name: report.name.clone(),
            row: row + 1,
            expected: report.header.len(),
            found: r.len(),
        });
    }
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| ReportError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io_err(dir))?;

    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(&report.header)?;
    for row in &report.rows {
        writer.write_record(row)?;
    }
    let bytes = writer.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    let csv_path = dir.join(format!("{}.csv", report.name));
    fs::write(&csv_path, bytes).map_err(io_err(&csv_path))?;

    let mut text = format!("{}\n", report.name);
    for line in &report.summary {
        text.push_str(line);
        text.push('\n');
    }
    let txt_path = dir.join(format!("{}.txt", report.name));
    fs::write(&txt_path, text).map_err(io_err(&txt_path))?;
    Ok(vec![csv_path, txt_path])
}
