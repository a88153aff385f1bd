//! Report records: `{cmd, n, metric, value}`, printed as JSON lines or as
//! aligned text.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Serialize)]
pub struct Record {
    pub cmd: &'static str,
    pub n: usize,
    pub metric: String,
    pub value: Value,
}

/// A closed stdout (e.g. piped into `head`) is not an error worth a panic.
fn line(args: std::fmt::Arguments) {
    let _ = writeln!(std::io::stdout(), "{args}");
}

pub struct Printer {
    format: Format,
    cmd: &'static str,
}

impl Printer {
    pub fn new(format: Format, cmd: &'static str) -> Self {
        Printer { format, cmd }
    }

    pub fn emit(&self, n: usize, metric: impl Into<String>, value: impl Into<Value>) {
        let r = Record { cmd: self.cmd, n, metric: metric.into(), value: value.into() };
        match self.format {
            Format::Json => line(format_args!("{}", serde_json::to_string(&r).expect("records serialize"))),
            Format::Human => {
                let v = match &r.value {
                    Value::String(s) => s.clone(),
                    Value::Number(x) if x.is_f64() => format!("{:.4}", x.as_f64().unwrap()),
                    other => other.to_string(),
                };
                line(format_args!("{:<28} {v}", r.metric));
            }
        }
    }

    /// The bare answer in human mode (for scripting), a record otherwise.
    pub fn answer(&self, n: usize, metric: &str, value: usize) {
        match self.format {
            Format::Human => line(format_args!("{value}")),
            Format::Json => self.emit(n, metric, value),
        }
    }
}
