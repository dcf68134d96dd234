use serde_json::{json, Map};

use super::{Command, Expected};
use crate::rational::{format_decimal, format_rational};
use crate::{Error, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Exact(Rational),
    Interval(Rational, Rational),
    Flag(bool),
    Text(String),
}

impl Value {
    pub fn render(&self, decimal: Option<usize>) -> String {
        let num = |v: &Rational| match decimal {
            Some(k) => format_decimal(v, k),
            None => format_rational(v),
        };
        match self {
            Value::Exact(v) => num(v),
            Value::Interval(lo, hi) => format!("[{}, {}]", num(lo), num(hi)),
            Value::Flag(b) => b.to_string(),
            Value::Text(t) => t.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Value::Exact(v) => json!(format_rational(v)),
            Value::Interval(lo, hi) => {
                json!({ "lower": format_rational(lo), "upper": format_rational(hi) })
            }
            Value::Flag(b) => json!(b),
            Value::Text(t) => json!(t),
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_flag(&self) -> Option<bool> {
        match self {
            Value::Flag(b) => Some(*b),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub key: String,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub key: String,
    pub expected: Expected,
    pub actual: Option<Value>,
    pub pass: bool,
}

impl Check {
    pub fn evaluate(key: &str, expected: &Expected, actual: Option<&Value>) -> Self {
        let pass = match (expected, actual) {
            (Expected::Exact(e), Some(Value::Exact(a))) => e == a,
            (Expected::Approx { value, tolerance }, Some(Value::Exact(a))) => {
                let diff = a - value;
                (if diff < Rational::from_integer(0.into()) {
                    -diff
                } else {
                    diff
                }) <= *tolerance
            }
            (Expected::Interval(lo, hi), Some(Value::Interval(a, b))) => lo == a && hi == b,
            (Expected::Flag(e), Some(Value::Flag(a))) => e == a,
            (Expected::Text(e), Some(Value::Text(a))) => e == a,
            _ => false,
        };
        Check {
            key: key.to_string(),
            expected: expected.clone(),
            actual: actual.cloned(),
            pass,
        }
    }
}

fn render_expected(e: &Expected, decimal: Option<usize>) -> String {
    match e {
        Expected::Exact(v) => Value::Exact(v.clone()).render(decimal),
        Expected::Approx { value, tolerance } => {
            format!(
                "{} ± {}",
                format_decimal(value, 4),
                format_decimal(tolerance, 4)
            )
        }
        Expected::Interval(lo, hi) => Value::Interval(lo.clone(), hi.clone()).render(decimal),
        Expected::Flag(b) => b.to_string(),
        Expected::Text(t) => t.clone(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub scenario: String,
    pub command: Command,
    pub rows: Vec<Row>,
    pub checks: Vec<Check>,
    /// Structured payloads for JSON output, keyed like rows.
    pub details: Map<String, serde_json::Value>,
}

impl Report {
    pub fn new(scenario: &str, command: Command) -> Self {
        Report {
            scenario: scenario.to_string(),
            command,
            rows: Vec::new(),
            checks: Vec::new(),
            details: Map::new(),
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: Value) {
        self.rows.push(Row {
            key: key.into(),
            value,
        });
    }

    pub fn exact(&mut self, key: impl Into<String>, v: Rational) {
        self.push(key, Value::Exact(v));
    }

    pub fn flag(&mut self, key: impl Into<String>, v: bool) {
        self.push(key, Value::Flag(v));
    }

    pub fn text(&mut self, key: impl Into<String>, v: impl Into<String>) {
        self.push(key, Value::Text(v.into()));
    }

    pub fn interval(&mut self, key: impl Into<String>, lo: Rational, hi: Rational) {
        self.push(key, Value::Interval(lo, hi));
    }

    pub fn detail(&mut self, key: impl Into<String>, v: serde_json::Value) {
        self.details.insert(key.into(), v);
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.rows.iter().find(|r| r.key == key).map(|r| &r.value)
    }

    /// True when every check passes, including when there are none.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn status(&self) -> &'static str {
        if self.checks.is_empty() {
            "NO-EXPECTATIONS"
        } else if self.passed() {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

pub fn render(report: &Report, format: Format, decimal: Option<usize>) -> Result<String> {
    match format {
        Format::Table => Ok(table(report, decimal)),
        Format::Json => {
            let rows: Map<String, serde_json::Value> = report
                .rows
                .iter()
                .map(|r| (r.key.clone(), r.value.json()))
                .collect();
            let checks: Vec<_> = report
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "key": c.key,
                        "expected": render_expected(&c.expected, None),
                        "actual": c.actual.as_ref().map(|v| v.json()),
                        "pass": c.pass,
                    })
                })
                .collect();
            let out = json!({
                "scenario": report.scenario,
                "command": report.command.name(),
                "rows": rows,
                "details": report.details,
                "checks": checks,
                "status": report.status(),
            });
            Ok(serde_json::to_string_pretty(&out)? + "\n")
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(["key", "value", "expected", "status"])
                .map_err(io)?;
            for r in &report.rows {
                let check = report.checks.iter().find(|c| c.key == r.key);
                w.write_record([
                    r.key.as_str(),
                    &r.value.render(decimal),
                    &check
                        .map(|c| render_expected(&c.expected, decimal))
                        .unwrap_or_default(),
                    check
                        .map(|c| if c.pass { "PASS" } else { "FAIL" })
                        .unwrap_or(""),
                ])
                .map_err(io)?;
            }
            for c in report.checks.iter().filter(|c| c.actual.is_none()) {
                w.write_record([
                    c.key.as_str(),
                    "",
                    &render_expected(&c.expected, decimal),
                    "FAIL",
                ])
                .map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
        }
    }
}

fn table(report: &Report, decimal: Option<usize>) -> String {
    let mut out = format!("{} :: {}\n", report.scenario, report.command.name());
    let width = report
        .rows
        .iter()
        .map(|r| r.key.chars().count())
        .max()
        .unwrap_or(0);
    for r in &report.rows {
        let pad = width - r.key.chars().count();
        out.push_str(&format!(
            "  {}{}  {}\n",
            r.key,
            " ".repeat(pad),
            r.value.render(decimal)
        ));
    }
    if !report.checks.is_empty() {
        out.push_str("checks:\n");
        for c in &report.checks {
            let actual = c
                .actual
                .as_ref()
                .map(|v| v.render(decimal))
                .unwrap_or_else(|| "missing".into());
            out.push_str(&format!(
                "  {} {}: expected {}, got {}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.key,
                render_expected(&c.expected, decimal),
                actual
            ));
        }
    }
    out.push_str(report.status());
    out.push('\n');
    out
}
