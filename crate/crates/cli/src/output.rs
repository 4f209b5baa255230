//! Tables rendered as CSV or JSON lines.

use std::io::Write;

use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    F(f64),
    I(i64),
    S(String),
    B(bool),
    Empty,
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::F(v) => format_float(*v),
            Field::I(v) => v.to_string(),
            Field::S(s) => s.clone(),
            Field::B(b) => b.to_string(),
            Field::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::F(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Field::I(v) => Value::from(*v),
            Field::S(s) => Value::from(s.as_str()),
            Field::B(b) => Value::from(*b),
            Field::Empty => Value::Null,
        }
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::F(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::I(v as i64)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::B(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::S(v.to_string())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::S(v)
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// Shortest round-tripping form, in exponent notation outside `[1e-4, 1e15)`.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 {
        "0".to_string()
    } else if !a.is_finite() || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, w: &mut dyn Write) -> Result<(), CliError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Field::csv)).map_err(io)?;
        }
        out.flush().map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn write_json_lines(&self, w: &mut dyn Write) -> Result<(), CliError> {
        for row in &self.rows {
            let obj: Map<String, Value> =
                self.header.iter().zip(row).map(|(k, v)| (k.to_string(), v.json())).collect();
            writeln!(w, "{}", Value::Object(obj)).map_err(|e| CliError::Io(e.to_string()))?;
        }
        Ok(())
    }
}

fn io(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}
