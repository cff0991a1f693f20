//! Deterministic JSON reports: keys keep insertion order and floats are
//! serialized with 17 significant digits so identical runs produce
//! byte-identical output.

use std::fmt::Write as _;

#[derive(Debug, Clone)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Array(Vec<Value>),
    Object(Vec<(String, Value)>),
}

impl Value {
    pub fn object() -> Value {
        Value::Object(Vec::new())
    }

    pub fn push(&mut self, key: &str, value: Value) -> &mut Self {
        match self {
            Value::Object(entries) => entries.push((key.to_string(), value)),
            _ => panic!("push on non-object"),
        }
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            Value::Bool(b) => {
                let _ = write!(out, "{b}");
            }
            Value::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Value::Float(f) => write_float(*f, out),
            Value::Str(s) => write_escaped(s, out),
            Value::Array(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            Value::Object(entries) => {
                out.push('{');
                for (i, (k, v)) in entries.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_escaped(k, out);
                    out.push(':');
                    v.write(out);
                }
                out.push('}');
            }
        }
    }
}

/// 17 significant digits; infinities are not valid JSON numbers and are
/// encoded as the strings "+inf" / "-inf" (documented in the README schema).
fn write_float(f: f64, out: &mut String) {
    if f.is_nan() {
        out.push_str("\"nan\"");
    } else if f.is_infinite() {
        out.push_str(if f > 0.0 { "\"+inf\"" } else { "\"-inf\"" });
    } else {
        let _ = write!(out, "{f:.16e}");
    }
}

fn write_escaped(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

pub fn floats(values: &[f64]) -> Value {
    Value::Array(values.iter().map(|&v| Value::Float(v)).collect())
}

pub fn float_matrix(m: &nalgebra::DMatrix<f64>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| floats(&(0..m.ncols()).map(|j| m[(i, j)]).collect::<Vec<_>>()))
            .collect(),
    )
}

pub fn complex_matrix(m: &nalgebra::DMatrix<num_complex::Complex64>) -> Value {
    let mut obj = Value::object();
    let re = nalgebra::DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re);
    let im = nalgebra::DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].im);
    obj.push("re", float_matrix(&re));
    obj.push("im", float_matrix(&im));
    obj
}
