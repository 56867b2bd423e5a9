//! Output formatting: `key = value` text, `key,value` CSV, and JSON lines.

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutFormat {
    #[default]
    Text,
    Csv,
    #[value(name = "json-lines")]
    JsonLines,
}

/// One record: an ordered list of string fields.
pub struct Record {
    pub fields: Vec<(&'static str, String)>,
}

impl Record {
    pub fn new(fields: Vec<(&'static str, String)>) -> Self {
        Record { fields }
    }
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

pub fn render_records(records: &[Record], format: OutFormat) -> String {
    let mut out = String::new();
    for (i, record) in records.iter().enumerate() {
        match format {
            OutFormat::Text => {
                if i > 0 {
                    out.push('\n');
                }
                for (k, v) in &record.fields {
                    out.push_str(&format!("{k} = {v}\n"));
                }
            }
            OutFormat::Csv => {
                for (k, v) in &record.fields {
                    out.push_str(&format!("{k},{v}\n"));
                }
            }
            OutFormat::JsonLines => {
                let body: Vec<String> = record
                    .fields
                    .iter()
                    .map(|(k, v)| format!("\"{}\":\"{}\"", json_escape(k), json_escape(v)))
                    .collect();
                out.push_str(&format!("{{{}}}\n", body.join(",")));
            }
        }
    }
    out
}

/// Plain data rows (curve output): two columns per row.
pub fn render_rows(rows: &[(String, String)], format: OutFormat) -> String {
    let mut out = String::new();
    for (t, v) in rows {
        match format {
            OutFormat::Text | OutFormat::Csv => out.push_str(&format!("{t},{v}\n")),
            OutFormat::JsonLines => out.push_str(&format!(
                "{{\"t\":\"{}\",\"value\":\"{}\"}}\n",
                json_escape(t),
                json_escape(v)
            )),
        }
    }
    out
}
