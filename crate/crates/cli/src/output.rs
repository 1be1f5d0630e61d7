use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub enum Cell {
    Int(u64),
    /// Fixed-point with the given number of decimals.
    Fixed(f64, usize),
    /// Scientific notation with the given number of significant decimals.
    Sci(f64, usize),
    Text(String),
    Missing,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Fixed(v, p) => format!("{v:.p$}"),
            Cell::Sci(v, p) => format!("{v:.p$e}"),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Fixed(..) | Cell::Sci(..) => self
                .render()
                .parse::<f64>()
                .ok()
                .and_then(Number::from_f64)
                .map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Missing => Value::Null,
        }
    }
}

pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Printed after the rows: `# ...` lines in CSV, a `notes` array in JSON.
    pub notes: Vec<String>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => {
                {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(&self.columns)?;
                    for row in &self.rows {
                        w.write_record(row.iter().map(Cell::render))?;
                    }
                    w.flush()?;
                }
                for note in &self.notes {
                    writeln!(out, "# {note}")?;
                }
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .cloned()
                            .zip(row.iter().map(Cell::json))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut doc = Map::new();
                doc.insert("columns".into(), Value::from(self.columns.clone()));
                doc.insert("rows".into(), Value::Array(rows));
                if !self.notes.is_empty() {
                    doc.insert("notes".into(), Value::from(self.notes.clone()));
                }
                serde_json::to_writer_pretty(&mut *out, &Value::Object(doc))?;
                writeln!(out)?;
            }
        }
        out.flush()
    }
}
