//! Report envelope and the three renderings (text, JSON, CSV).

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::Args;

pub const SCHEMA: &str = "pdsa-report/1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Floats carry 17 significant digits in every format.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        // normalizes -0
        format!("{:.16e}", x + 0.0)
    } else {
        x.to_string()
    }
}

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        serde_json::from_str(&fmt_f64(x)).expect("valid number")
    } else {
        Value::String(x.to_string())
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(num).collect())
}

pub fn serialize_f64<S: serde::Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    num(*x).serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

pub fn digest(path: &Path) -> std::io::Result<InputDigest> {
    let bytes = std::fs::read(path)?;
    let hash = Sha256::digest(&bytes);
    Ok(InputDigest {
        path: path.display().to_string(),
        sha256: hash.iter().map(|b| format!("{b:02x}")).collect(),
    })
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn text(&self) -> String {
        let mut width: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let s: Vec<String> = cells
                .iter()
                .zip(&width)
                .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            s.join("  ").trim_end().to_string()
        };
        let mut out = line(&self.header);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }

    fn csv(&self) -> String {
        let esc = |c: &String| {
            if c.contains([',', '"', '\n']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        };
        let mut out = String::new();
        for r in std::iter::once(&self.header).chain(&self.rows) {
            out.push_str(&r.iter().map(esc).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }
}

/// What a command hands back: verdict lines for humans, an optional table,
/// the structured result and whether a verification failed.
#[derive(Debug, Default)]
pub struct Outcome {
    pub lines: Vec<String>,
    pub table: Option<Table>,
    pub result: Map<String, Value>,
    pub failed: bool,
    pub inputs: Vec<InputDigest>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub fn render(args: &Args, outcome: &Outcome) -> String {
    let status = if outcome.failed { "verification_failed" } else { "ok" };
    match args.format {
        Format::Json => {
            let v = json!({
                "schema": SCHEMA,
                "version": VERSION,
                "config": args,
                "inputs": outcome.inputs,
                "status": status,
                "summary": outcome.lines,
                "result": Value::Object(outcome.result.clone()),
            });
            let mut s = serde_json::to_string_pretty(&v).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv | Format::Text => {
            let mut out = String::new();
            let comment = if args.format == Format::Csv { "# " } else { "" };
            for l in &outcome.lines {
                out.push_str(comment);
                out.push_str(l);
                out.push('\n');
            }
            if let Some(t) = &outcome.table {
                if args.format == Format::Csv {
                    out.push_str(&t.csv());
                } else {
                    out.push('\n');
                    out.push_str(&t.text());
                }
            }
            if args.format == Format::Text {
                out.push('\n');
            }
            out.push_str(&format!("# schema {SCHEMA} version {VERSION} status {status}\n"));
            out.push_str(&format!(
                "# config {}\n",
                serde_json::to_string(args).expect("serializable")
            ));
            for d in &outcome.inputs {
                out.push_str(&format!("# input {} sha256 {}\n", d.path, d.sha256));
            }
            out
        }
    }
}
