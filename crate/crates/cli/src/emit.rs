//! Deterministic CSV and JSON writers.

use crate::error::CliError;
use serde::Serialize;
use serde_json::{Map, Value};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    let mut m = Map::new();
                    for (c, &v) in self.columns.iter().zip(r) {
                        m.insert(c.clone(), json_number(v));
                    }
                    Value::Object(m)
                })
                .collect(),
        )
    }
}

/// Seventeen significant digits, no locale, `NaN`/`inf` spelled out.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn json_number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

pub fn table_csv(t: &Table) -> String {
    let mut s = t.columns.join(",");
    s.push('\n');
    for r in &t.rows {
        let cells: Vec<String> = r.iter().map(|&v| fmt_f64(v)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Flattens nested objects and arrays into `a.b`/`a_0` columns of a
/// single row.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}_{i}"), x, out);
            }
        }
        Value::Number(n) => out.push((prefix.to_string(), n.as_f64().map_or_else(|| n.to_string(), fmt_f64))),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
    }
}

pub fn record_csv(v: &Value) -> String {
    let mut cells = Vec::new();
    flatten("", v, &mut cells);
    let (keys, vals): (Vec<_>, Vec<_>) = cells.into_iter().unzip();
    format!("{}\n{}\n", keys.join(","), vals.join(","))
}

pub enum Output {
    Table(Table),
    Record(Value),
    /// A table for CSV and a richer document for JSON.
    Both(Table, Value),
}

impl Output {
    pub fn record<T: Serialize>(v: &T) -> Result<Self, CliError> {
        Ok(Output::Record(to_value(v)?))
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        Ok(match (self, format) {
            (Output::Table(t), Format::Csv) | (Output::Both(t, _), Format::Csv) => table_csv(t),
            (Output::Table(t), Format::Json) => pretty(&t.to_json())?,
            (Output::Record(v), Format::Csv) => record_csv(v),
            (Output::Record(v), Format::Json) | (Output::Both(_, v), Format::Json) => pretty(v)?,
        })
    }
}

pub fn to_value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Numerical(format!("serialization: {e}")))
}

fn pretty(v: &Value) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Numerical(format!("serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p.display(), e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::io("stdout", e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only_for_empty_table() {
        let t = Table::new(&["E_tilde", "S_n"]);
        assert_eq!(table_csv(&t), "E_tilde,S_n\n");
    }

    #[test]
    fn three_rows_four_lines() {
        let mut t = Table::new(&["E_tilde", "S_n"]);
        for k in 0..3 {
            t.push(vec![k as f64, 0.1 * k as f64]);
        }
        let s = table_csv(&t);
        assert_eq!(s.lines().count(), 4);
        assert!(s.ends_with('\n') && !s.contains('\r'));
    }

    #[test]
    fn floats_keep_seventeen_digits() {
        let x = 0.1f64 + 0.2;
        let s = fmt_f64(x);
        assert_eq!(s.parse::<f64>().unwrap(), x);
        assert_eq!(s, "3.0000000000000004e-1");
        assert_eq!(fmt_f64(f64::NAN), "NaN");
    }

    #[test]
    fn records_flatten() {
        let v = serde_json::json!({"a": 1.5, "b": [2.0, 3.0], "c": {"d": true}});
        assert_eq!(
            record_csv(&v),
            "a,b_0,b_1,c.d\n1.5000000000000000e0,2.0000000000000000e0,3.0000000000000000e0,true\n"
        );
    }
}
