//! CSV and JSON emitters with a fixed number of significant digits.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// `x` rounded to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: u32) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    let p = digits.clamp(1, 17) as usize;
    format!("{:.*e}", p - 1, x).parse().unwrap_or(x)
}

/// Shortest text that reads back as `round_sig(x, digits)`.
pub fn format_number(x: f64, digits: u32) -> String {
    let y = round_sig(x, digits);
    let a = y.abs();
    if y == 0.0 || (1e-5..1e16).contains(&a) || !y.is_finite() {
        format!("{y}")
    } else {
        format!("{y:e}")
    }
}

fn round_value(v: &mut Value, digits: u32) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap(), digits);
            if let Some(m) = serde_json::Number::from_f64(x) {
                *n = m;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(|x| round_value(x, digits)),
        Value::Object(o) => o.values_mut().for_each(|x| round_value(x, digits)),
        _ => {}
    }
}

fn cell(v: &Value, digits: u32) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) if n.is_f64() => format_number(n.as_f64().unwrap(), digits),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Where and how to write results.
#[derive(Debug, Clone)]
pub struct Emitter {
    pub format: Format,
    pub precision: u32,
    pub out: Option<PathBuf>,
}

impl Emitter {
    fn sink(&self) -> Result<Box<dyn Write>, CliError> {
        Ok(match &self.out {
            Some(p) => Box::new(File::create(p)?),
            None => Box::new(io::stdout().lock()),
        })
    }

    /// Emits one record (an object) or a table (an array of objects).
    pub fn emit(&self, v: Value) -> Result<(), CliError> {
        let w = self.sink()?;
        match self.format {
            Format::Json => write_json(v, self.precision, w),
            Format::Csv => write_csv(&v, self.precision, w),
        }
    }
}

pub fn write_json<W: Write>(mut v: Value, digits: u32, mut w: W) -> Result<(), CliError> {
    round_value(&mut v, digits);
    serde_json::to_writer_pretty(&mut w, &v)?;
    writeln!(w)?;
    Ok(())
}

pub fn write_json_file(v: Value, digits: u32, path: &Path) -> Result<(), CliError> {
    write_json(v, digits, File::create(path)?)
}

/// Header from the keys of the first row; nested values are written as JSON.
pub fn write_csv<W: Write>(v: &Value, digits: u32, w: W) -> Result<(), CliError> {
    let empty = Map::new();
    let rows: Vec<&Map<String, Value>> = match v {
        Value::Array(a) => a.iter().map(|r| r.as_object().unwrap_or(&empty)).collect(),
        Value::Object(o) => vec![o],
        _ => Vec::new(),
    };
    let mut wr = csv::Writer::from_writer(w);
    if let Some(first) = rows.first() {
        wr.write_record(first.keys())?;
        for r in &rows {
            wr.write_record(
                first
                    .keys()
                    .map(|k| r.get(k).map(|x| cell(x, digits)).unwrap_or_default()),
            )?;
        }
    }
    wr.flush()?;
    Ok(())
}
