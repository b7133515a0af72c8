//! Text, JSON and CSV rendering shared by all subcommands.

use std::io::{self, Write};

use clap::ValueEnum;
use lotto_core::extended::{ACCURACY_BITS, WORK_BITS};
use lotto_core::{ExactRational, Probability};
use serde_json::{json, Value};

/// Bumped whenever a JSON field is renamed or removed.
pub const SCHEMA_VERSION: u32 = 1;

/// Digits in the `decimal` field of JSON probabilities.
const JSON_DECIMALS: u32 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// One command's result in all three renderings.
pub struct Output {
    pub text: String,
    pub json: Value,
    pub csv: Vec<Vec<String>>,
}

impl Output {
    pub fn new(command: &str, text: String, mut json: Value, csv: Vec<Vec<String>>) -> Self {
        if let Value::Object(map) = &mut json {
            map.insert("schema_version".into(), json!(SCHEMA_VERSION));
            map.insert("command".into(), json!(command));
        }
        Output { text, json, csv }
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Text => out.write_all(self.text.as_bytes()),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.json)?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                for row in &self.csv {
                    w.write_record(row)?;
                }
                w.flush()
            }
        }
    }
}

pub fn rational_json(r: &ExactRational, decimals: u32) -> Value {
    json!({
        "numerator": r.numer().to_string(),
        "denominator": r.denom().to_string(),
        "decimal": r.render_decimal(JSON_DECIMALS),
        "percent": r.render_percent(decimals),
    })
}

/// Exact values carry their reduced fraction; extended-precision values
/// carry the fixed-point fraction `mantissa / 2^WORK_BITS` and its accuracy.
pub fn probability_json(p: &Probability, decimals: u32) -> Value {
    let mut v = rational_json(&p.to_rational(), decimals);
    v["exact"] = json!(p.is_exact());
    if !p.is_exact() {
        v["accuracy_bits"] = json!(ACCURACY_BITS);
        v["fixed_point_bits"] = json!(WORK_BITS);
    }
    v
}

/// `1234567` -> `1,234,567`.
pub fn group(x: impl ToString) -> String {
    let s = x.to_string();
    let mut out = String::with_capacity(s.len() + s.len() / 3);
    for (i, c) in s.chars().enumerate() {
        if i > 0 && (s.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

/// Left-aligned first column, right-aligned others.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, cell) in cells.iter().enumerate() {
            let pad = width[i] - cell.chars().count();
            if i == 0 {
                s.push_str(cell);
                s.push_str(&" ".repeat(pad));
            } else {
                s.push_str("  ");
                s.push_str(&" ".repeat(pad));
                s.push_str(cell);
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().take(cols).map(String::as_str).collect()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grouping() {
        assert_eq!(group(13_983_816u64), "13,983,816");
        assert_eq!(group(258u32), "258");
        assert_eq!(group(1_000u32), "1,000");
        assert_eq!(group(0u32), "0");
    }

    #[test]
    fn table_alignment() {
        let t = table(&["a", "value"], &[vec!["x".into(), "1".into()], vec!["long".into(), "22".into()]]);
        assert_eq!(t, "a     value\nx         1\nlong     22\n");
    }

    #[test]
    fn probability_fields() {
        let p = Probability::Exact(ExactRational::new(1u32, 3u32));
        let v = probability_json(&p, 3);
        assert_eq!(v["numerator"], "1");
        assert_eq!(v["denominator"], "3");
        assert_eq!(v["percent"], "33.333");
        assert_eq!(v["exact"], true);
    }
}
