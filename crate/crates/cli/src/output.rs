//! Tables written as CSV (17 significant digits) or JSON `{meta, data}`.

use crate::args::{Format, OutputArgs};
use serde_json::{json, Map, Value};
use std::io::Write;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:.16e}"),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Float(x) => json!(x),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Map<String, Value>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new(), meta: Map::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = self.columns.join(",");
                s.push('\n');
                for r in &self.rows {
                    s.push_str(&r.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let data: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| Value::Object(self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect()))
                    .collect();
                let mut s = serde_json::to_string_pretty(&json!({ "meta": self.meta, "data": data })).expect("tables hold finite numbers");
                s.push('\n');
                s
            }
        }
    }

    pub fn write(&self, out: &OutputArgs) -> std::io::Result<()> {
        let text = self.render(out.format);
        match &out.out {
            Some(path) => std::fs::write(path, text),
            None => std::io::stdout().lock().write_all(text.as_bytes()),
        }
    }
}
