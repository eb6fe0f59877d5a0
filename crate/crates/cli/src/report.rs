//! Deterministic structured reports: an ordered key/value tree with two
//! byte-stable renderings (`text` = flat dotted keys, `tree` =
//! indentation). Field order is insertion order, never sorted, so a
//! fixed input and tool version always serialize identically.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Leaf(String),
    Node(Vec<(String, Value)>),
}

impl Value {
    pub fn leaf(v: impl fmt::Display) -> Value {
        Value::Leaf(v.to_string())
    }

    pub fn node() -> Value {
        Value::Node(Vec::new())
    }

    /// Appends a child to a node value. Panics on leaves.
    pub fn push(&mut self, key: impl Into<String>, value: Value) -> &mut Value {
        match self {
            Value::Node(fields) => {
                fields.push((key.into(), value));
                self
            }
            Value::Leaf(_) => panic!("cannot push into a leaf"),
        }
    }

    pub fn push_leaf(&mut self, key: impl Into<String>, v: impl fmt::Display) -> &mut Value {
        self.push(key, Value::leaf(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Tree,
}

/// A command report. Serialization is byte-deterministic; timing is
/// appended separately by the caller and excluded from fixtures.
#[derive(Debug, Clone, Default)]
pub struct Report {
    fields: Vec<(String, Value)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: Value) -> &mut Self {
        self.fields.push((key.into(), value));
        self
    }

    pub fn push_leaf(&mut self, key: impl Into<String>, v: impl fmt::Display) -> &mut Self {
        self.push(key, Value::leaf(v))
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Text => {
                for (key, value) in &self.fields {
                    render_text(&mut out, key, value);
                }
            }
            Format::Tree => {
                for (key, value) in &self.fields {
                    render_tree(&mut out, key, value, 0);
                }
            }
        }
        out
    }
}

fn render_text(out: &mut String, path: &str, value: &Value) {
    match value {
        Value::Leaf(v) => {
            out.push_str(path);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        Value::Node(fields) => {
            for (key, child) in fields {
                render_text(out, &format!("{path}.{key}"), child);
            }
        }
    }
}

fn render_tree(out: &mut String, key: &str, value: &Value, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
    match value {
        Value::Leaf(v) => {
            out.push_str(key);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        Value::Node(fields) => {
            out.push_str(key);
            out.push_str(":\n");
            for (k, child) in fields {
                render_tree(out, k, child, depth + 1);
            }
        }
    }
}
