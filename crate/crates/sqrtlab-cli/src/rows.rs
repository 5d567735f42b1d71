//! Output rows and writers.
//!
//! Every subject emits rows against a fixed, versioned schema (documented
//! in the README). Formatting is deterministic: integers in decimal,
//! floats with 17 significant digits in scientific notation, LF line
//! endings. CSV and JSON-lines carry identical values.

use std::fmt::Write as _;
use std::io::{self, Write};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColType {
    Int,
    Float,
    Str,
}

/// A versioned column layout; `name` appears in the README docs.
#[derive(Clone, Copy, Debug)]
pub struct Schema {
    pub name: &'static str,
    pub columns: &'static [(&'static str, ColType)],
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    U(u128),
    I(i128),
    F(f64),
    S(String),
    Empty,
}

impl Value {
    fn matches(&self, t: ColType) -> bool {
        matches!(
            (self, t),
            (Value::U(_), ColType::Int)
                | (Value::I(_), ColType::Int)
                | (Value::F(_), ColType::Float)
                | (Value::S(_), ColType::Str)
                | (Value::Empty, _)
        )
    }
}

/// 17 significant digits, scientific; parses back to the identical f64.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    format!("{v:.16e}")
}

fn fmt_value(v: &Value) -> String {
    match v {
        Value::U(x) => x.to_string(),
        Value::I(x) => x.to_string(),
        Value::F(x) => fmt_f64(*x),
        Value::S(s) => {
            debug_assert!(
                !s.contains(',') && !s.contains('"') && !s.contains('\n'),
                "string cells must not need CSV quoting"
            );
            s.clone()
        }
        Value::Empty => String::new(),
    }
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub values: Vec<Value>,
}

impl Row {
    pub fn new(values: Vec<Value>) -> Self {
        Row { values }
    }

    pub fn to_csv(&self, schema: &Schema) -> String {
        debug_assert_eq!(self.values.len(), schema.columns.len());
        let mut line = String::new();
        for (i, v) in self.values.iter().enumerate() {
            debug_assert!(v.matches(schema.columns[i].1), "column {}", schema.columns[i].0);
            if i > 0 {
                line.push(',');
            }
            line.push_str(&fmt_value(v));
        }
        line
    }

    pub fn to_jsonl(&self, schema: &Schema) -> String {
        let mut line = String::from("{");
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            let _ = write!(line, "\"{}\":", schema.columns[i].0);
            match v {
                Value::U(x) => {
                    let _ = write!(line, "{x}");
                }
                Value::I(x) => {
                    let _ = write!(line, "{x}");
                }
                Value::F(x) => {
                    if x.is_finite() {
                        line.push_str(&fmt_f64(*x));
                    } else {
                        let _ = write!(line, "\"{}\"", fmt_f64(*x));
                    }
                }
                Value::S(s) => {
                    let _ = write!(line, "\"{}\"", json_escape(s));
                }
                Value::Empty => line.push_str("null"),
            }
        }
        line.push('}');
        line
    }

    /// Parses a CSV line back against the schema; the round-trip test of
    /// schema stability.
    pub fn parse_csv(schema: &Schema, line: &str) -> Result<Row, String> {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != schema.columns.len() {
            return Err(format!(
                "expected {} cells, found {}",
                schema.columns.len(),
                cells.len()
            ));
        }
        let mut values = Vec::with_capacity(cells.len());
        for (cell, (name, t)) in cells.iter().zip(schema.columns) {
            if cell.is_empty() {
                values.push(Value::Empty);
                continue;
            }
            let v = match t {
                ColType::Int => {
                    if let Some(stripped) = cell.strip_prefix('-') {
                        Value::I(-stripped.parse::<i128>().map_err(|e| format!("{name}: {e}"))?)
                    } else {
                        Value::U(cell.parse::<u128>().map_err(|e| format!("{name}: {e}"))?)
                    }
                }
                ColType::Float => {
                    Value::F(cell.parse::<f64>().map_err(|e| format!("{name}: {e}"))?)
                }
                ColType::Str => Value::S((*cell).to_string()),
            };
            values.push(v);
        }
        Ok(Row { values })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

/// Serializes a full table deterministically: header plus one line per row.
pub fn render(schema: &Schema, rows: &[Row], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            let header: Vec<&str> = schema.columns.iter().map(|&(n, _)| n).collect();
            out.push_str(&header.join(","));
            out.push('\n');
            for row in rows {
                out.push_str(&row.to_csv(schema));
                out.push('\n');
            }
        }
        Format::Jsonl => {
            for row in rows {
                out.push_str(&row.to_jsonl(schema));
                out.push('\n');
            }
        }
    }
    out
}

pub fn write_table(
    schema: &Schema,
    rows: &[Row],
    format: Format,
    mut sink: impl Write,
) -> io::Result<()> {
    sink.write_all(render(schema, rows, format).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCHEMA: Schema = Schema {
        name: "test.v1",
        columns: &[("a", ColType::Int), ("b", ColType::Float), ("c", ColType::Str)],
    };

    #[test]
    fn csv_round_trip() {
        let row = Row::new(vec![
            Value::U(96),
            Value::F(73.714285714285715),
            Value::S("convolution".into()),
        ]);
        let line = row.to_csv(&SCHEMA);
        assert_eq!(Row::parse_csv(&SCHEMA, &line).unwrap(), row);
        let neg = Row::new(vec![Value::I(-7), Value::F(-0.0), Value::Empty]);
        let line = neg.to_csv(&SCHEMA);
        let back = Row::parse_csv(&SCHEMA, &line).unwrap();
        assert_eq!(back.values[0], Value::I(-7));
        assert_eq!(back.values[2], Value::Empty);
    }

    #[test]
    fn float_format_is_reversible() {
        for v in [0.0, 1.0, -1.0, 1.0 / 3.0, 47_616.0, 1e-300, 123_456_789.123_456_78] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }

    #[test]
    fn jsonl_shape() {
        let row = Row::new(vec![Value::U(1), Value::F(0.5), Value::S("x".into())]);
        assert_eq!(row.to_jsonl(&SCHEMA), "{\"a\":1,\"b\":5.0000000000000000e-1,\"c\":\"x\"}");
    }
}
