//! Tabular reports and their three renderings.
//!
//! Every number is formatted once, into a [`Cell`]. The text table, the CSV
//! and the JSON records are all built from those cells, so the three formats
//! carry the same digits.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    /// Space-aligned table.
    #[default]
    Text,
    /// Comma-separated table; notes follow as `#` comment lines.
    Csv,
    /// One JSON object per line: a record per state, a sum, a summary.
    Records,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    /// A value printed with a fixed number of decimals.
    Fixed(f64, usize),
    Text(String),
    Flag(bool),
    Blank,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn numeric(&self) -> bool {
        matches!(self, Cell::Int(_) | Cell::Fixed(..))
    }

    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Fixed(v, places) => fixed(*v, *places),
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => b.to_string(),
            Cell::Blank => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            // Parse the printed digits back so JSON matches the tables.
            Cell::Fixed(..) => {
                let s = self.render();
                s.parse::<f64>()
                    .ok()
                    .and_then(Number::from_f64)
                    .map_or(Value::String(s), Value::Number)
            }
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Flag(b) => Value::Bool(*b),
            Cell::Blank => Value::Null,
        }
    }
}

/// `places` decimals, switching to scientific notation for magnitudes a
/// positional form would print as a wall of digits (or as zero).
pub fn fixed(v: f64, places: usize) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v.is_nan() {
        return "nan".into();
    }
    let a = v.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{v:.places$e}")
    } else {
        format!("{v:.places$}")
    }
}

/// A summary line: a key and named values.
#[derive(Debug, Clone, PartialEq)]
pub struct Note {
    pub key: String,
    pub fields: Vec<(String, Cell)>,
}

impl Note {
    pub fn new(key: impl Into<String>) -> Self {
        Note {
            key: key.into(),
            fields: Vec::new(),
        }
    }

    pub fn with(mut self, name: impl Into<String>, value: Cell) -> Self {
        self.fields.push((name.into(), value));
        self
    }

    fn line(&self) -> String {
        let mut s = format!("{}:", self.key);
        for (name, value) in &self.fields {
            let _ = write!(s, " {name}={}", value.render());
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub command: String,
    pub flags: Vec<(String, String)>,
    pub headers: Vec<String>,
    /// One row per state, aligned with `headers`.
    pub rows: Vec<Vec<Cell>>,
    pub sum: Option<Vec<Cell>>,
    pub notes: Vec<Note>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Csv => self.csv(),
            Format::Records => self.records(),
        }
    }

    fn flag_line(&self) -> String {
        let mut s = self.command.clone();
        for (k, v) in &self.flags {
            let _ = write!(s, " {k}={v}");
        }
        s
    }

    fn text(&self) -> String {
        let all: Vec<&Vec<Cell>> = self.rows.iter().chain(self.sum.as_ref()).collect();
        let widths: Vec<usize> = self
            .headers
            .iter()
            .enumerate()
            .map(|(c, h)| {
                all.iter()
                    .map(|r| r[c].render().len())
                    .chain(std::iter::once(h.len()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        // Columns holding numbers are right-aligned, header included.
        let right: Vec<bool> = (0..self.headers.len())
            .map(|c| self.rows.iter().any(|r| r[c].numeric()))
            .collect();
        let line = |cells: Vec<String>| -> String {
            let mut s = String::new();
            for (c, cell) in cells.iter().enumerate() {
                if c > 0 {
                    s.push_str("  ");
                }
                if right[c] {
                    let _ = write!(s, "{cell:>w$}", w = widths[c]);
                } else {
                    let _ = write!(s, "{cell:<w$}", w = widths[c]);
                }
            }
            s.trim_end().to_string()
        };

        let mut out = String::new();
        let _ = writeln!(out, "{}", self.flag_line());
        let _ = writeln!(out, "{}", line(self.headers.clone()));
        for row in &self.rows {
            let _ = writeln!(out, "{}", line(row.iter().map(Cell::render).collect()));
        }
        if let Some(sum) = &self.sum {
            let total: usize = widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1);
            let _ = writeln!(out, "{}", "-".repeat(total));
            let _ = writeln!(out, "{}", line(sum.iter().map(Cell::render).collect()));
        }
        if !self.notes.is_empty() {
            out.push('\n');
        }
        for note in &self.notes {
            let _ = writeln!(out, "{}", note.line());
        }
        out
    }

    fn csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        let record = |w: &mut csv::Writer<Vec<u8>>, cells: Vec<String>| {
            w.write_record(&cells).expect("writing to memory");
        };
        record(&mut w, self.headers.clone());
        for row in self.rows.iter().chain(self.sum.as_ref()) {
            record(&mut w, row.iter().map(Cell::render).collect());
        }
        let body =
            String::from_utf8(w.into_inner().expect("in-memory buffer")).expect("utf-8 input");
        let mut out = format!("# {}\n", self.flag_line());
        out.push_str(&body);
        for note in &self.notes {
            let _ = writeln!(out, "# {}", note.line());
        }
        out
    }

    fn records(&self) -> String {
        let object = |kind: &str, cells: &[Cell]| -> Value {
            let mut m = Map::new();
            m.insert("record".into(), kind.into());
            for (h, c) in self.headers.iter().zip(cells) {
                m.insert(h.clone(), c.json());
            }
            Value::Object(m)
        };
        let mut out = String::new();
        for row in &self.rows {
            let _ = writeln!(out, "{}", object("state", row));
        }
        if let Some(sum) = &self.sum {
            let _ = writeln!(out, "{}", object("sum", sum));
        }
        let mut summary = Map::new();
        summary.insert("record".into(), "summary".into());
        summary.insert("command".into(), self.command.clone().into());
        let flags: Map<String, Value> = self
            .flags
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        summary.insert("flags".into(), Value::Object(flags));
        let notes: Vec<Value> = self
            .notes
            .iter()
            .map(|n| {
                let mut m = Map::new();
                m.insert("key".into(), n.key.clone().into());
                for (name, value) in &n.fields {
                    m.insert(name.clone(), value.json());
                }
                Value::Object(m)
            })
            .collect();
        summary.insert("notes".into(), Value::Array(notes));
        let _ = writeln!(out, "{}", Value::Object(summary));
        out
    }
}
