//! Documents and their serialization.

use std::fmt;

use num_bigint::BigInt;
use serde_json::{Map, Value};

use crate::motive::{Basis, MotClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Text,
}

/// A value with its plain-text and JSON renderings.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub text: String,
    pub json: Value,
}

impl Cell {
    pub fn class(c: &MotClass, basis: Basis) -> Cell {
        Cell {
            text: c.format(basis),
            json: serde_json::to_value(c.to_doc(basis)).expect("class docs serialize"),
        }
    }

    /// Big integers are emitted as decimal strings in JSON.
    pub fn int(n: &BigInt) -> Cell {
        Cell {
            text: n.to_string(),
            json: Value::String(n.to_string()),
        }
    }

    pub fn count(n: usize) -> Cell {
        Cell {
            text: n.to_string(),
            json: Value::from(n),
        }
    }

    pub fn bool(b: bool) -> Cell {
        Cell {
            text: b.to_string(),
            json: Value::Bool(b),
        }
    }

    pub fn text(s: impl fmt::Display) -> Cell {
        let text = s.to_string();
        Cell {
            json: Value::String(text.clone()),
            text,
        }
    }

    /// Text rendering with a structured JSON value.
    pub fn rich(text: impl fmt::Display, json: Value) -> Cell {
        Cell {
            text: text.to_string(),
            json,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Doc {
    Scalar {
        name: String,
        value: Cell,
    },
    Table {
        columns: Vec<String>,
        rows: Vec<Vec<Cell>>,
        summary: Vec<(String, Cell)>,
    },
}

impl Doc {
    pub fn scalar(name: &str, value: Cell) -> Doc {
        Doc::Scalar {
            name: name.to_string(),
            value,
        }
    }

    pub fn table(columns: &[&str], rows: Vec<Vec<Cell>>, summary: Vec<(&str, Cell)>) -> Doc {
        Doc::Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
            summary: summary
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
    }
}

/// Serializes a document. Output is byte-identical for equal documents: JSON
/// keys are sorted, integers are decimal strings, lines end in `\n`.
pub fn emit(doc: &Doc, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let v = match doc {
                Doc::Scalar { value, .. } => value.json.clone(),
                Doc::Table {
                    columns,
                    rows,
                    summary,
                } => {
                    let mut top = Map::new();
                    top.insert(
                        "columns".into(),
                        Value::Array(columns.iter().cloned().map(Value::String).collect()),
                    );
                    let rows = rows
                        .iter()
                        .map(|r| {
                            Value::Object(
                                columns
                                    .iter()
                                    .cloned()
                                    .zip(r.iter().map(|c| c.json.clone()))
                                    .collect(),
                            )
                        })
                        .collect();
                    top.insert("rows".into(), Value::Array(rows));
                    if !summary.is_empty() {
                        let s = summary
                            .iter()
                            .map(|(k, c)| (k.clone(), c.json.clone()))
                            .collect();
                        top.insert("summary".into(), Value::Object(s));
                    }
                    Value::Object(top)
                }
            };
            let mut out = serde_json::to_vec(&v).expect("json values serialize");
            out.push(b'\n');
            out
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            match doc {
                Doc::Scalar { name, value } => {
                    w.write_record([name.as_str()]).expect("in-memory write");
                    w.write_record([value.text.as_str()]).expect("in-memory write");
                }
                Doc::Table { columns, rows, .. } => {
                    w.write_record(columns).expect("in-memory write");
                    for r in rows {
                        w.write_record(r.iter().map(|c| c.text.as_str()))
                            .expect("in-memory write");
                    }
                }
            }
            w.into_inner().expect("in-memory flush")
        }
        Format::Text => {
            let mut s = String::new();
            match doc {
                Doc::Scalar { value, .. } => {
                    s.push_str(&value.text);
                    s.push('\n');
                }
                Doc::Table {
                    columns,
                    rows,
                    summary,
                } => {
                    s.push_str(&columns.join("\t"));
                    s.push('\n');
                    for r in rows {
                        let cells: Vec<&str> = r.iter().map(|c| c.text.as_str()).collect();
                        s.push_str(&cells.join("\t"));
                        s.push('\n');
                    }
                    for (k, c) in summary {
                        s.push_str(&format!("{k}: {}\n", c.text));
                    }
                }
            }
            s.into_bytes()
        }
    }
}
