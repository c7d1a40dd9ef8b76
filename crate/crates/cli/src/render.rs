//! Flat record rendering: one code path feeding JSON, CSV, and aligned
//! tables so every format carries identical numeric content. Big integers
//! are always decimal strings in JSON; native numbers stay within u64.

use std::io::Write;

use serde_json::{json, Map, Value};

#[derive(Debug, Clone)]
pub enum Field {
    Str(String),
    UInt(u64),
    Int(i64),
    Float(f64),
    Bool(bool),
    /// Rendered as a JSON array of strings, `;`-joined elsewhere.
    List(Vec<String>),
    /// count -> frequency histogram; a JSON object keyed by decimal count.
    Counts(Vec<(u64, u64)>),
}

impl Field {
    fn to_json(&self) -> Value {
        match self {
            Field::Str(s) => json!(s),
            Field::UInt(u) => json!(u),
            Field::Int(i) => json!(i),
            Field::Float(f) => json!(f),
            Field::Bool(b) => json!(b),
            Field::List(items) => json!(items),
            Field::Counts(pairs) => {
                let mut map = Map::new();
                for (k, v) in pairs {
                    map.insert(k.to_string(), json!(v));
                }
                Value::Object(map)
            }
        }
    }

    fn to_cell(&self) -> String {
        match self {
            Field::Str(s) => s.clone(),
            Field::UInt(u) => u.to_string(),
            Field::Int(i) => i.to_string(),
            Field::Float(f) => f.to_string(),
            Field::Bool(b) => b.to_string(),
            Field::List(items) => items.join(";"),
            Field::Counts(pairs) => pairs
                .iter()
                .map(|(k, v)| format!("{k}:{v}"))
                .collect::<Vec<_>>()
                .join(";"),
        }
    }
}

/// An ordered list of named fields; insertion order is the column order.
#[derive(Debug, Clone, Default)]
pub struct Record {
    fields: Vec<(String, Field)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(mut self, key: &str, value: Field) -> Self {
        self.fields.push((key.to_string(), value));
        self
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (k, v) in &self.fields {
            map.insert(k.clone(), v.to_json());
        }
        Value::Object(map)
    }

    fn keys(&self) -> Vec<String> {
        self.fields.iter().map(|(k, _)| k.clone()).collect()
    }

    fn cells(&self, keys: &[String]) -> Vec<String> {
        keys.iter()
            .map(|k| {
                self.fields
                    .iter()
                    .find(|(fk, _)| fk == k)
                    .map(|(_, v)| v.to_cell())
                    .unwrap_or_default()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Write records in the chosen format. A single record prints as one JSON
/// object; several print as a JSON array. CSV gets a header row; the table
/// layout is keys-as-rows for one record and aligned columns otherwise.
pub fn write_records(
    out: &mut dyn Write,
    format: Format,
    records: &[Record],
) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let value = if records.len() == 1 {
                records[0].to_json()
            } else {
                Value::Array(records.iter().map(Record::to_json).collect())
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&value)?)
        }
        Format::Csv => {
            let keys = union_keys(records);
            let mut writer = csv::Writer::from_writer(vec![]);
            writer
                .write_record(&keys)
                .map_err(csv_err)?;
            for r in records {
                writer.write_record(r.cells(&keys)).map_err(csv_err)?;
            }
            let bytes = writer.into_inner().map_err(|e| csv_err(e.into_error().into()))?;
            out.write_all(&bytes)
        }
        Format::Table => {
            if records.len() == 1 {
                let keys = records[0].keys();
                let width = keys.iter().map(String::len).max().unwrap_or(0);
                for (k, cell) in keys.iter().zip(records[0].cells(&keys)) {
                    writeln!(out, "{k:width$}  {cell}")?;
                }
                Ok(())
            } else {
                let keys = union_keys(records);
                let mut rows: Vec<Vec<String>> = vec![keys.clone()];
                rows.extend(records.iter().map(|r| r.cells(&keys)));
                let widths: Vec<usize> = (0..keys.len())
                    .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
                    .collect();
                for row in rows {
                    let line: Vec<String> = row
                        .iter()
                        .zip(&widths)
                        .map(|(cell, w)| format!("{cell:w$}"))
                        .collect();
                    writeln!(out, "{}", line.join("  ").trim_end())?;
                }
                Ok(())
            }
        }
    }
}

fn union_keys(records: &[Record]) -> Vec<String> {
    let mut keys: Vec<String> = Vec::new();
    for r in records {
        for k in r.keys() {
            if !keys.contains(&k) {
                keys.push(k);
            }
        }
    }
    keys
}

fn csv_err(e: csv::Error) -> std::io::Error {
    std::io::Error::other(e)
}
