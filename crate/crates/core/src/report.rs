//! Report serialization: JSON with every float at 17 significant digits,
//! and CSV/TSV tables.

use crate::measures::CurvatureMeasure;
use serde::Serialize;
use serde_json::{Map, Number, Value};

pub const SCHEMA: &str = "asa-kit/1";

/// `x` with 17 significant digits in scientific notation; `NaN`, `inf`,
/// `-inf` for non-finite values.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn float_value(x: f64) -> Value {
    if x.is_finite() {
        serde_json::from_str::<Number>(&fmt_f64(x)).map(Value::Number).unwrap_or(Value::Null)
    } else {
        Value::String(fmt_f64(x))
    }
}

/// Rewrite every non-integer number with 17 significant digits.
pub fn fix_precision(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => float_value(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => Value::Array(a.into_iter().map(fix_precision).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, fix_precision(v))).collect()),
        other => other,
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    fix_precision(serde_json::to_value(x).unwrap_or(Value::Null))
}

/// Pretty JSON with trailing newline.
pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
    s.push('\n');
    s
}

/// Top-level report document: schema tag, provenance fields, then payload.
pub fn document(command: &str, header: Vec<(&str, Value)>, payload: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), Value::String(SCHEMA.into()));
    m.insert("command".into(), Value::String(command.into()));
    for (k, v) in header {
        m.insert(k.into(), fix_precision(v));
    }
    m.insert("result".into(), payload);
    Value::Object(m)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_f64(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.into())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    /// Text cells containing the separator, quotes or newlines are quoted
    /// for CSV; TSV replaces tabs and newlines with spaces.
    pub fn to_delimited(&self, sep: char) -> String {
        let esc = |s: String| -> String {
            if sep == '\t' {
                s.replace(['\t', '\n'], " ")
            } else if s.contains([sep, '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s
            }
        };
        let mut out = String::new();
        let line = |cells: Vec<String>| cells.into_iter().map(esc).collect::<Vec<_>>().join(&sep.to_string());
        out.push_str(&line(self.headers.clone()));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r.iter().map(Cell::render).collect()));
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        self.to_delimited(',')
    }

    pub fn to_tsv(&self) -> String {
        self.to_delimited('\t')
    }
}

/// `(iteration, value)` optimizer trace.
pub fn trace_table(trace: &[(usize, f64)]) -> Table {
    let mut t = Table::new(&["iteration", "value"]);
    for &(i, v) in trace {
        t.push(vec![i.into(), v.into()]);
    }
    t
}

/// One row per density sample then one per atom.
pub fn measure_table(m: &CurvatureMeasure) -> Table {
    let n = m.samples.first().map(|s| s.x.len()).or_else(|| m.atoms.first().map(|a| a.point.len())).unwrap_or(0);
    let mut headers = vec!["kind".to_string()];
    headers.extend((0..n).map(|k| format!("x{k}")));
    headers.extend(["weight", "density", "mass"].iter().map(|s| s.to_string()));
    let mut t = Table { headers, rows: Vec::new() };
    for (s, d) in m.samples.iter().zip(&m.density) {
        let mut row: Vec<Cell> = vec!["density".into()];
        row.extend(s.x.iter().map(|&c| Cell::Num(c)));
        row.extend([Cell::Num(s.weight), Cell::Num(*d), Cell::Num(s.weight * d)]);
        t.push(row);
    }
    for a in &m.atoms {
        let mut row: Vec<Cell> = vec!["atom".into()];
        row.extend(a.point.iter().map(|&c| Cell::Num(c)));
        row.extend([Cell::Num(0.0), Cell::Num(0.0), Cell::Num(a.mass)]);
        t.push(row);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_seventeen_digits() {
        assert_eq!(fmt_f64(std::f64::consts::PI), "3.1415926535897931e0");
        let v = to_value(&(1.0f64, 3usize, 0.1f64));
        assert_eq!(serde_json::to_string(&v).unwrap(), "[1.0000000000000000e+0,3,1.0000000000000001e-1]");
        let back: f64 = serde_json::from_value(v[2].clone()).unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn non_finite_values_become_strings() {
        assert_eq!(to_value(&f64::INFINITY), Value::Null);
        assert_eq!(float_value(f64::NEG_INFINITY), Value::String("-inf".into()));
    }

    #[test]
    fn delimited_tables_quote_when_needed() {
        let mut t = Table::new(&["name", "value"]);
        t.push(vec!["a,b".into(), 2.0.into()]);
        assert_eq!(t.to_csv(), "name,value\n\"a,b\",2.0000000000000000e0\n");
        assert_eq!(t.to_tsv(), "name\tvalue\na,b\t2.0000000000000000e0\n");
    }
}
