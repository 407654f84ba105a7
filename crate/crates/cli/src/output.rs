//! CSV and JSON rendering of result tables.

use crate::error::{CliError, Result};
use clap::ValueEnum;
use serde_json::{json, Map, Value};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// 17 significant digits in scientific notation; independent of locale and
/// round-trips every double.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Num(x) => format_number(*x),
        Cell::Int(n) => n.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Bool(b) => b.to_string(),
    }
}

fn cell_json(c: &Cell) -> Value {
    match c {
        // Non-finite numbers have no JSON form.
        Cell::Num(x) if x.is_finite() => json!(x),
        Cell::Num(_) => Value::Null,
        Cell::Int(n) => json!(n),
        Cell::Text(s) => json!(s),
        Cell::Bool(b) => json!(b),
    }
}

pub fn render_csv(table: &Table) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Numerical(format!("csv encoding: {e}"));
    w.write_record(&table.columns).map_err(fail)?;
    for row in &table.rows {
        w.write_record(row.iter().map(cell_text)).map_err(fail)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Numerical(format!("csv encoding: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
}

pub fn render_json(table: &Table, config: &Value, extra: Option<(&str, Value)>) -> String {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = table
                .columns
                .iter()
                .zip(row)
                .map(|(k, c)| (k.to_string(), cell_json(c)))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let mut doc = Map::new();
    doc.insert("config".into(), config.clone());
    doc.insert("rows".into(), Value::Array(rows));
    if let Some((k, v)) = extra {
        doc.insert(k.into(), v);
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json values serialise");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for &x in &[
            0.0,
            -2.0 / std::f64::consts::PI,
            1e-300,
            123456.789,
            f64::MIN_POSITIVE,
        ] {
            let s = format_number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_number(0.5), "5.0000000000000000e-1");
        assert_eq!(format_number(f64::NAN), "nan");
        assert_eq!(format_number(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn csv_has_header_and_rows() {
        let mut t = Table::new(&["a", "status"]);
        t.push(vec![1.0.into(), "ok".into()]);
        t.push(vec![f64::NAN.into(), "bad, really".into()]);
        let s = render_csv(&t).unwrap();
        assert_eq!(
            s,
            "a,status\n1.0000000000000000e0,ok\nnan,\"bad, really\"\n"
        );
    }

    #[test]
    fn json_echoes_config() {
        let mut t = Table::new(&["x"]);
        t.push(vec![f64::INFINITY.into()]);
        let v: Value = serde_json::from_str(&render_json(&t, &json!({"k": 1}), None)).unwrap();
        assert_eq!(v["config"]["k"], 1);
        assert!(v["rows"][0]["x"].is_null());
    }
}
