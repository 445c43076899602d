use qaudit_core::audit::{float_repr, AuditReport};
use serde_json::{Map, Value};

use crate::config::OutputFormat;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => csv_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json_float(*x),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

/// 17 significant digits; non-finite values as `NaN`, `inf`, `-inf`.
pub fn csv_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        float_repr::to_text(x)
    }
}

fn json_float(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::from(float_repr::to_text(x)))
}

/// Named columns with one row per record.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn render(&self, format: OutputFormat) -> Result<String, String> {
        match format {
            OutputFormat::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(r)
                            .map(|(c, v)| (c.to_string(), v.json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                pretty(&rows)
            }
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns).map_err(|e| e.to_string())?;
                for r in &self.rows {
                    w.write_record(r.iter().map(Cell::csv))
                        .map_err(|e| e.to_string())?;
                }
                finish_csv(w)
            }
        }
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string_pretty(v)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| e.to_string())
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String, String> {
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

pub fn render_report(report: &AuditReport, format: OutputFormat) -> Result<String, String> {
    match format {
        OutputFormat::Json => pretty(report),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "id",
                "description",
                "measured",
                "expected",
                "tolerance",
                "status",
            ])
            .map_err(|e| e.to_string())?;
            for c in &report.checks {
                w.write_record([
                    c.id.clone(),
                    c.description.clone(),
                    csv_float(c.measured),
                    csv_float(c.expected),
                    csv_float(c.tolerance),
                    c.status.to_string(),
                ])
                .map_err(|e| e.to_string())?;
            }
            finish_csv(w)
        }
    }
}
