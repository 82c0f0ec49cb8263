//! Deterministic CSV and JSON rendering.
//!
//! Floats are written as the shortest decimal that round-trips. CSV files
//! start with `#` lines echoing the effective config, then a fixed header.

use std::fs;
use std::path::PathBuf;

use serde_json::{Map, Value};

use crate::config::{Format, RunConfig};
use crate::error::CliError;

pub const OUT_DIR_ENV: &str = "TOPOWIRE_OUT_DIR";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    B(bool),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(x) => float(*x),
            Cell::I(i) => i.to_string(),
            Cell::B(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

pub fn float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        serde_json::to_string(&x).expect("finite float serializes")
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
    /// Top-level JSON fields besides `config`.
    pub json: Map<String, Value>,
}

fn config_value(cfg: &RunConfig) -> Result<Value, CliError> {
    serde_json::to_value(cfg).map_err(|e| CliError::Io(e.to_string()))
}

pub fn render(cfg: &RunConfig, report: &Report) -> Result<String, CliError> {
    match cfg.format {
        Format::Json => {
            let mut obj = report.json.clone();
            obj.insert("config".into(), config_value(cfg)?);
            let mut s = serde_json::to_string_pretty(&Value::Object(obj)).map_err(|e| CliError::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut out = format!("# topowire {}\n", cfg.command);
            if let Value::Object(m) = config_value(cfg)? {
                for (k, v) in m {
                    let v = match v {
                        Value::String(s) => s,
                        other => other.to_string(),
                    };
                    out.push_str(&format!("# {k}={v}\n"));
                }
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(report.header).map_err(|e| CliError::Io(e.to_string()))?;
            for row in &report.rows {
                w.write_record(row.iter().map(Cell::render))
                    .map_err(|e| CliError::Io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
            out.push_str(&String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))?);
            Ok(out)
        }
    }
}

/// `--output`, else `$TOPOWIRE_OUT_DIR/<command>.<ext>`, else stdout.
pub fn destination(cfg: &RunConfig) -> Option<PathBuf> {
    cfg.output.clone().or_else(|| {
        std::env::var_os(OUT_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(|d| PathBuf::from(d).join(format!("{}.{}", cfg.command, cfg.format.extension())))
    })
}

pub fn write(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match destination(cfg) {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            }
            fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
    }
}
