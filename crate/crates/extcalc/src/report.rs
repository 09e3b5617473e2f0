use std::fmt::Write as _;

use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

/// What a command produced: the report and whether it counts as success.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    /// `false` maps to exit status 3.
    pub ok: bool,
}

impl Outcome {
    pub fn ok(report: Value) -> Self {
        Outcome { report, ok: true }
    }

    pub fn failed(report: Value) -> Self {
        Outcome { report, ok: false }
    }

    pub fn exit_code(&self) -> u8 {
        if self.ok {
            0
        } else {
            3
        }
    }
}

pub fn render(v: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("values serialize");
            s.push('\n');
            s
        }
        OutputFormat::Table => {
            let mut out = String::new();
            table(v, 0, &mut out);
            out
        }
    }
}

/// `key: value` lines; nested objects are indented and arrays of scalars
/// stay on one line.
fn table(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if is_scalar_like(x) {
                    let _ = writeln!(out, "{pad}{k}: {}", inline(x));
                } else {
                    let _ = writeln!(out, "{pad}{k}:");
                    table(x, indent + 1, out);
                }
            }
        }
        Value::Array(items) if !is_scalar_like(v) => {
            for (i, x) in items.iter().enumerate() {
                if is_scalar_like(x) {
                    let _ = writeln!(out, "{pad}[{i}] {}", inline(x));
                } else {
                    let _ = writeln!(out, "{pad}[{i}]");
                    table(x, indent + 1, out);
                }
            }
        }
        _ => {
            let _ = writeln!(out, "{pad}{}", inline(v));
        }
    }
}

fn is_scalar_like(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(items) => items.iter().all(|x| !matches!(x, Value::Object(_) | Value::Array(_))),
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(inline).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn table_rendering() {
        let v = json!({"b": [1, 2], "a": {"x": "y"}, "c": [{"d": 1}]});
        assert_eq!(render(&v, OutputFormat::Table), "a:\n  x: y\nb: [1, 2]\nc:\n  [0]\n    d: 1\n");
        assert!(render(&v, OutputFormat::Json).starts_with("{\n  \"a\""));
    }
}
