use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Command output in all three renderings.
pub struct Report {
    /// One JSON document, or one per line when `json_lines` is set.
    pub json: Vec<Value>,
    pub json_lines: bool,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Replaces the default aligned rendering of `rows`.
    pub table: Option<String>,
}

impl Report {
    pub fn new(json: Value, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Report {
            json: vec![json],
            json_lines: false,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
            table: None,
        }
    }

    pub fn lines(json: Vec<Value>, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Report { json_lines: true, ..Report::new(Value::Null, header, rows) }.with_json(json)
    }

    fn with_json(mut self, json: Vec<Value>) -> Self {
        self.json = json;
        self
    }

    pub fn with_table(mut self, table: String) -> Self {
        self.table = Some(table);
        self
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Json => {
                if self.json_lines {
                    for v in &self.json {
                        writeln!(out, "{v}")?;
                    }
                } else {
                    writeln!(out, "{}", self.json[0])?;
                }
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
            Format::Table => match &self.table {
                Some(t) => write!(out, "{t}")?,
                None => write!(out, "{}", aligned(&self.header, &self.rows))?,
            },
        }
        Ok(())
    }
}

/// Right-aligned columns separated by two spaces.
pub fn aligned(header: &[String], rows: &[Vec<String>]) -> String {
    let ncols = header.len().max(rows.iter().map(|r| r.len()).max().unwrap_or(0));
    let mut width = vec![0; ncols];
    for row in std::iter::once(header).chain(rows.iter().map(|r| r.as_slice())) {
        for (i, cell) in row.iter().enumerate() {
            width[i] = width[i].max(cell.chars().count());
        }
    }
    let mut s = String::new();
    for row in std::iter::once(header).chain(rows.iter().map(|r| r.as_slice())) {
        let cells: Vec<String> =
            row.iter().enumerate().map(|(i, c)| format!("{c:>w$}", w = width[i])).collect();
        s.push_str(cells.join("  ").trim_end());
        s.push('\n');
    }
    s
}

/// Space-separated list, as used inside CSV and table cells.
pub fn spaced<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}
