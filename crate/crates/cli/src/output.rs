use std::fmt::Write as _;

use serde_json::Value;

/// Float with 17 significant digits: fixed notation for moderate magnitudes, exponent
/// notation otherwise. Non-finite values become `null`.
pub fn format_f64(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return "0.0000000000000000".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..16).contains(&mag) {
        let decimals = (16 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // log10 can land one off near powers of ten; re-check the digit count.
        let digits = s.chars().filter(|c| c.is_ascii_digit()).count() - leading_zeros(&s);
        if digits == 17 {
            return s;
        }
        let decimals = if digits > 17 { decimals.saturating_sub(digits - 17) } else { decimals + (17 - digits) };
        return format!("{x:.decimals$}");
    }
    format!("{x:.16e}")
}

fn leading_zeros(s: &str) -> usize {
    s.chars().filter(|c| c.is_ascii_digit()).take_while(|c| *c == '0').count()
}

/// Deterministic pretty JSON: object keys in map order, two-space indent.
pub fn render_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                write!(out, "{i}").unwrap();
            } else if let Some(u) = n.as_u64() {
                write!(out, "{u}").unwrap();
            } else {
                out.push_str(&format_f64(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(items) => {
            if items.iter().all(|i| !i.is_array() && !i.is_object()) {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, item, depth);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(out, item, depth + 1);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&serde_json::to_string(key).expect("string serializes"));
                out.push_str(": ");
                write_value(out, item, depth + 1);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
    }
}

/// Rows for CSV output. Numeric cells use the same 17-digit rendering as JSON.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::Number(n) if n.as_i64().is_none() && n.as_u64().is_none() => format_f64(n.as_f64().unwrap_or(f64::NAN)),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render_csv(table: &Table) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.headers).expect("in-memory write");
    for row in &table.rows {
        w.write_record(row.iter().map(cell)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

/// key,value rows for results without a natural table.
pub fn flatten(result: &Value) -> Table {
    let mut rows = Vec::new();
    flatten_into("", result, &mut rows);
    Table { headers: vec!["key".into(), "value".into()], rows }
}

fn flatten_into(prefix: &str, v: &Value, rows: &mut Vec<Vec<Value>>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten_into(&join(k), x, rows)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten_into(&join(&i.to_string()), x, rows)),
        other => rows.push(vec![Value::String(prefix.to_string()), other.clone()]),
    }
}
