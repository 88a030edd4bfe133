use serde::Serialize;

use crate::args::Format;
use crate::config::{Provenance, RunConfig};
use crate::error::CliResult;

/// Flat rows for CSV and text, plus a structured value for JSON.
#[derive(Debug, Clone)]
pub struct Report {
    pub table: Table,
    pub json: serde_json::Value,
    /// Summary lines shown above the table in text output.
    pub notes: Vec<String>,
    /// Set when the command found a violated invariant; the output is still
    /// written but the process exits with code 3.
    pub violation: Option<String>,
}

impl Report {
    pub fn new<T: Serialize, J: Serialize>(rows: &[T], json: &J) -> CliResult<Self> {
        Ok(Report {
            table: Table::from_rows(rows)?,
            json: serde_json::to_value(json)?,
            notes: Vec::new(),
            violation: None,
        })
    }

    pub fn note(mut self, line: impl Into<String>) -> Self {
        self.notes.push(line.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// Builds the table through the CSV serializer so that CSV and text
    /// output share field names and number formatting.
    pub fn from_rows<T: Serialize>(rows: &[T]) -> CliResult<Self> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in rows {
            w.serialize(row)?;
        }
        let bytes = w.into_inner().map_err(|e| crate::error::CliError::Output(e.to_string()))?;
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes.as_slice());
        let headers = r.headers()?.iter().map(String::from).collect();
        let rows =
            r.records().map(|rec| rec.map(|rec| rec.iter().map(String::from).collect())).collect::<Result<_, _>>()?;
        Ok(Table { headers, rows })
    }

    pub fn to_csv(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if !self.headers.is_empty() {
            w.write_record(&self.headers)?;
        }
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.into_inner().map_err(|e| crate::error::CliError::Output(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.headers);
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    provenance: &'a Provenance,
    config: &'a RunConfig,
    results: &'a serde_json::Value,
}

pub fn render(report: &Report, config: &RunConfig, format: Format) -> CliResult<Vec<u8>> {
    let provenance = config.provenance()?;
    match format {
        Format::Csv => report.table.to_csv(),
        Format::Json => {
            let doc = JsonDocument { provenance: &provenance, config, results: &report.json };
            let mut out = serde_json::to_vec_pretty(&doc)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Text => {
            let mut out = format!(
                "# {} seed={} trials={} config={} version={}\n",
                config.command,
                provenance.seed,
                provenance.trials,
                &provenance.config_hash[..16],
                provenance.version
            );
            for note in &report.notes {
                out.push_str(&format!("# {note}\n"));
            }
            out.push_str(&report.table.to_text());
            Ok(out.into_bytes())
        }
    }
}
