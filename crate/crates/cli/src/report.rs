//! Report encoding.
//!
//! Reports are `serde_json` values. Object keys are sorted, floats are
//! decimal strings with 17 significant digits, and matrices are arrays of
//! rows, so equal inputs give byte-identical output.

use std::fmt::Write;

use clap::ValueEnum;
use krein_core::{Inertia, Mat, TolerancePolicy};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

pub fn number(x: f64) -> Value {
    let x = if x == 0.0 { 0.0 } else { x };
    Value::String(format!("{x:.16e}"))
}

pub fn matrix(m: &Mat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| number(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn inertia(i: &Inertia) -> Value {
    json!({
        "nu_plus": i.nu_plus,
        "nu_zero": i.nu_zero,
        "nu_minus": i.nu_minus,
        "display": i.to_string(),
    })
}

pub fn tolerances(t: &TolerancePolicy) -> Value {
    json!({
        "relative_zero": number(t.relative_zero),
        "residual_tol": number(t.residual_tol),
    })
}

/// Parses a matrix written by [`matrix`].
pub fn parse_matrix(v: &Value) -> Option<Mat> {
    let rows = v.as_array()?;
    let cols = rows.first()?.as_array()?.len();
    let mut m = Mat::zeros(rows.len(), cols);
    for (i, r) in rows.iter().enumerate() {
        let r = r.as_array()?;
        if r.len() != cols {
            return None;
        }
        for (j, x) in r.iter().enumerate() {
            m[(i, j)] = x.as_str()?.parse().ok()?;
        }
    }
    Some(m)
}

pub fn render(report: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        OutputFormat::Text => {
            let mut out = String::new();
            text(&mut out, "", report);
            out
        }
    }
}

fn is_matrix(v: &Value) -> bool {
    v.as_array()
        .is_some_and(|rows| !rows.is_empty() && rows.iter().all(|r| r.as_array().is_some_and(|c| c.iter().all(Value::is_string))))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn text(out: &mut String, prefix: &str, v: &Value) {
    match v {
        Value::Object(map) => object(out, prefix, map),
        Value::Array(items) if is_matrix(v) => {
            let _ = writeln!(out, "{prefix}:");
            for row in items {
                let cells: Vec<String> = row.as_array().into_iter().flatten().map(scalar).collect();
                let _ = writeln!(out, "  {}", cells.join("  "));
            }
        }
        Value::Array(items) => {
            if items.is_empty() {
                let _ = writeln!(out, "{prefix}: []");
            }
            for (k, item) in items.iter().enumerate() {
                text(out, &format!("{prefix}[{k}]"), item);
            }
        }
        other => {
            let _ = writeln!(out, "{prefix}: {}", scalar(other));
        }
    }
}

fn object(out: &mut String, prefix: &str, map: &Map<String, Value>) {
    for (k, v) in map {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        text(out, &key, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_round_trips() {
        for x in [0.25, -1.0, 1.0 / 3.0, 1e-300, 6.02214076e23] {
            let s = number(x);
            assert_eq!(s.as_str().unwrap().parse::<f64>().unwrap(), x);
        }
        assert_eq!(number(0.25), json!("2.5000000000000000e-1"));
        assert_eq!(number(-0.0), number(0.0));
    }

    #[test]
    fn keys_are_sorted() {
        let v = json!({"b": 1, "a": 2});
        assert!(render(&v, OutputFormat::Json).find("\"a\"").unwrap() < render(&v, OutputFormat::Json).find("\"b\"").unwrap());
    }

    #[test]
    fn matrix_round_trip_and_text() {
        let m = Mat::from_row_slice(2, 2, &[1.0, -2.0, 0.5, 3.0]);
        assert_eq!(parse_matrix(&matrix(&m)).unwrap(), m);
        let t = render(&json!({"M": matrix(&m), "k": 1}), OutputFormat::Text);
        assert!(t.starts_with("M:\n  1.0000000000000000e0  -2.0000000000000000e0\n"));
        assert!(t.ends_with("k: 1\n"));
    }
}
