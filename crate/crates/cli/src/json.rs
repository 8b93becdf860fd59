//! JSON encoding conventions and the `--pretty` renderer.
//!
//! Exact values are strings such as `"3/16"`; floating values are wrapped as
//! `{"float": ...}` so that no untagged float ever appears in the output.

use kzm_core::numerics::{ComplexMatrix, Rational, RationalMatrix, C64};
use serde_json::{json, Map, Value};

pub fn rational(q: &Rational) -> Value {
    Value::String(q.to_string())
}

pub fn rationals(qs: &[Rational]) -> Value {
    Value::Array(qs.iter().map(rational).collect())
}

pub fn rational_matrix(m: &RationalMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(rational).collect()))
            .collect(),
    )
}

pub fn float(x: f64) -> Value {
    json!({ "float": x })
}

fn pair(z: &C64) -> Value {
    json!([z.re, z.im])
}

pub fn complex(z: &C64) -> Value {
    json!({ "float": pair(z) })
}

pub fn complexes(zs: &[C64]) -> Value {
    json!({ "float": zs.iter().map(pair).collect::<Vec<_>>() })
}

/// Untagged row-major `[re, im]` rows.
fn complex_rows(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| pair(&m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn complex_matrix(m: &ComplexMatrix) -> Value {
    json!({ "float": complex_rows(m) })
}

pub fn error_report(kind: &str, message: &str) -> Value {
    json!({ "error": { "kind": kind, "message": message } })
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(m) if m.len() == 1 && m.contains_key("float") => inline(&m["float"]),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(inline).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn is_compact(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| is_scalar(x) || is_compact(x)) && inline(v).len() <= 72,
        Value::Object(m) => m.len() == 1 && m.contains_key("float") && inline(v).len() <= 72,
        _ => true,
    }
}

fn render_into(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => render_object(map, indent, out),
        Value::Array(items) => {
            for (k, item) in items.iter().enumerate() {
                if is_compact(item) {
                    out.push_str(&format!("{pad}- {}\n", inline(item)));
                } else {
                    out.push_str(&format!("{pad}- [{k}]\n"));
                    render_into(item, indent + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other))),
    }
}

fn render_object(map: &Map<String, Value>, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
    for (k, v) in map {
        if is_compact(v) {
            out.push_str(&format!("{pad}{k:<width$}  {}\n", inline(v)));
        } else {
            out.push_str(&format!("{pad}{k}\n"));
            render_into(v, indent + 1, out);
        }
    }
}

/// Indented key/value rendering of a report.
pub fn render_pretty(v: &Value) -> String {
    let mut out = String::new();
    render_into(v, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use kzm_core::numerics::rat;

    #[test]
    fn rationals_are_strings() {
        assert_eq!(rational(&rat(3, 16)), json!("3/16"));
        assert_eq!(rational(&rat(0, 1)), json!("0"));
        assert_eq!(rational(&rat(-4, 2)), json!("-2"));
    }

    #[test]
    fn floats_are_tagged() {
        assert_eq!(float(0.5), json!({"float": 0.5}));
        assert_eq!(complex(&C64::new(1.0, -2.0)), json!({"float": [1.0, -2.0]}));
    }

    #[test]
    fn pretty_rendering_is_aligned() {
        let v = json!({"rank": 1, "residual": "0", "deviation": {"float": 1e-9}});
        let text = render_pretty(&v);
        assert!(text.contains("rank       1"));
        assert!(text.contains("deviation  0.000000001") || text.contains("deviation  1e-9"));
    }
}
