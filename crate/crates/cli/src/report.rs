//! Command reports and their two renderings.
//!
//! The JSON form is canonical: object keys come out sorted (serde_json's
//! default map is ordered) and every exact quantity is a string `"a"` or
//! `"a/b"`, so parsing and re-rendering reproduces the same bytes.

use serde_json::{Map, Value};
use symdist::exactnum::{render, Integer, Rational};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub struct Report {
    pub command: &'static str,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            inputs: Map::new(),
            results: Map::new(),
        }
    }

    pub fn input(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    pub fn to_value(&self) -> Value {
        let mut top = Map::new();
        top.insert("command".into(), Value::from(self.command));
        top.insert("inputs".into(), Value::Object(self.inputs.clone()));
        top.insert("results".into(), Value::Object(self.results.clone()));
        top.insert("version".into(), Value::from(VERSION));
        Value::Object(top)
    }

    pub fn to_json(&self) -> String {
        render_json(&self.to_value())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.command);
        write_map(&mut out, &self.inputs, 1);
        out.push_str("results\n");
        write_map(&mut out, &self.results, 1);
        out
    }
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn exact(x: &Rational) -> Value {
    Value::String(render(x))
}

pub fn integer(x: &Integer) -> Value {
    Value::String(x.to_string())
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object()) => Some(format!(
            "[{}]",
            items
                .iter()
                .map(|i| scalar(i).unwrap_or_default())
                .collect::<Vec<_>>()
                .join(", ")
        )),
        _ => None,
    }
}

fn write_map(out: &mut String, map: &Map<String, Value>, depth: usize) {
    let pad = "  ".repeat(depth);
    for (k, v) in map {
        match (scalar(v), v) {
            (Some(text), _) if !text.contains('\n') => {
                out.push_str(&format!("{pad}{k}: {text}\n"));
            }
            (Some(text), _) => {
                out.push_str(&format!("{pad}{k}:\n"));
                for line in text.lines() {
                    out.push_str(&format!("{pad}  {line}\n"));
                }
            }
            (None, Value::Object(inner)) => {
                out.push_str(&format!("{pad}{k}\n"));
                write_map(out, inner, depth + 1);
            }
            (None, Value::Array(items)) => {
                out.push_str(&format!("{pad}{k}\n"));
                for (i, item) in items.iter().enumerate() {
                    match item {
                        Value::Object(inner) => {
                            out.push_str(&format!("{pad}  [{i}]\n"));
                            write_map(out, inner, depth + 2);
                        }
                        other => {
                            let text = scalar(other).unwrap_or_default();
                            out.push_str(&format!("{pad}  [{i}] {text}\n"));
                        }
                    }
                }
            }
            (None, _) => unreachable!("scalars render"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use symdist::exactnum::rat;

    #[test]
    fn json_is_sorted_and_stable() {
        let mut r = Report::new("demo").input("z", 1).input("a", 2);
        r.set("value", exact(&rat(-3, 4)));
        let text = r.to_json();
        assert!(text.find("\"a\"").unwrap() < text.find("\"z\"").unwrap());
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(render_json(&parsed), text);
        assert!(text.contains("\"-3/4\""));
    }

    #[test]
    fn text_nests() {
        let mut r = Report::new("demo").input("n", 3);
        r.set("list", Value::from(vec![1, 2]));
        r.set("rows", serde_json::json!([{"a": 1}]));
        let t = r.to_text();
        assert!(t.contains("  n: 3\n"));
        assert!(t.contains("  list: [1, 2]\n"));
        assert!(t.contains("    [0]\n      a: 1\n"));
    }
}
