//! A small JSON tree with a deterministic writer. Floats are printed with 17
//! significant digits so that reports are bit-reproducible.

use std::fmt::Write;

use nca_core::{CMatrix, Element, RMatrix, Witness, C64};

#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn obj() -> Self {
        Json::Obj(Vec::new())
    }

    /// Appends a field; panics on non-objects.
    pub fn with(mut self, key: &str, value: impl Into<Json>) -> Self {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Json>) {
        match self {
            Json::Obj(fields) => fields.push((key.to_string(), value.into())),
            _ => panic!("push on a non-object"),
        }
    }

    pub fn get(&self, key: &str) -> Option<&Json> {
        match self {
            Json::Obj(fields) => fields.iter().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => write!(out, "{i}").unwrap(),
            Json::Num(x) => out.push_str(&format_float(*x)),
            Json::Str(s) => out.push_str(&serde_json::to_string(s).unwrap()),
            Json::Arr(items) if items.is_empty() => out.push_str("[]"),
            Json::Arr(items) if items.iter().all(Json::is_scalar) => {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    item.write(out, indent);
                }
                out.push(']');
            }
            Json::Arr(items) => {
                out.push_str("[\n");
                for (k, item) in items.iter().enumerate() {
                    pad(out, indent + 1);
                    item.write(out, indent + 1);
                    out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
                }
                pad(out, indent);
                out.push(']');
            }
            Json::Obj(fields) if fields.is_empty() => out.push_str("{}"),
            Json::Obj(fields) => {
                out.push_str("{\n");
                for (k, (key, value)) in fields.iter().enumerate() {
                    pad(out, indent + 1);
                    out.push_str(&serde_json::to_string(key).unwrap());
                    out.push_str(": ");
                    value.write(out, indent + 1);
                    out.push_str(if k + 1 < fields.len() { ",\n" } else { "\n" });
                }
                pad(out, indent);
                out.push('}');
            }
        }
    }

    fn is_scalar(&self) -> bool {
        match self {
            Json::Arr(items) => items.len() <= 2 && items.iter().all(|j| matches!(j, Json::Num(_))),
            Json::Obj(_) => false,
            _ => true,
        }
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

/// `{:.16e}` for finite values; non-finite values become strings.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "\"nan\"".into()
    } else if x > 0.0 {
        "\"inf\"".into()
    } else {
        "\"-inf\"".into()
    }
}

impl From<bool> for Json {
    fn from(b: bool) -> Self {
        Json::Bool(b)
    }
}

impl From<f64> for Json {
    fn from(x: f64) -> Self {
        Json::Num(x)
    }
}

impl From<usize> for Json {
    fn from(i: usize) -> Self {
        Json::Int(i as i64)
    }
}

impl From<u64> for Json {
    fn from(i: u64) -> Self {
        Json::Int(i as i64)
    }
}

impl From<&str> for Json {
    fn from(s: &str) -> Self {
        Json::Str(s.to_string())
    }
}

impl From<String> for Json {
    fn from(s: String) -> Self {
        Json::Str(s)
    }
}

impl<T: Into<Json>> From<Vec<T>> for Json {
    fn from(v: Vec<T>) -> Self {
        Json::Arr(v.into_iter().map(Into::into).collect())
    }
}

impl<T: Into<Json>> From<Option<T>> for Json {
    fn from(v: Option<T>) -> Self {
        v.map_or(Json::Null, Into::into)
    }
}

pub fn complex(z: C64) -> Json {
    Json::Arr(vec![Json::Num(z.re), Json::Num(z.im)])
}

pub fn cmatrix(m: &CMatrix) -> Json {
    Json::Arr(
        (0..m.nrows())
            .map(|i| Json::Arr((0..m.ncols()).map(|j| complex(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn rmatrix(m: &RMatrix) -> Json {
    Json::Arr(
        (0..m.nrows())
            .map(|i| Json::Arr((0..m.ncols()).map(|j| Json::Num(m[(i, j)])).collect()))
            .collect(),
    )
}

/// Per-block 2-D arrays of `[re, im]` pairs.
pub fn element(e: &Element) -> Json {
    Json::Arr(e.blocks().iter().map(cmatrix).collect())
}

/// Distances with `None` rendered as the `"disconnected"` sentinel.
pub fn distances(d: &[Vec<Option<f64>>]) -> Json {
    Json::Arr(
        d.iter()
            .map(|row| {
                Json::Arr(
                    row.iter()
                        .map(|v| v.map_or(Json::Str("disconnected".into()), Json::Num))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn witness(w: &Witness) -> Json {
    match w {
        Witness::Elements(es) => Json::obj()
            .with("kind", "elements")
            .with("elements", Json::Arr(es.iter().map(element).collect())),
        Witness::Indices(ix) => Json::obj().with("kind", "indices").with("indices", ix.clone()),
        Witness::Vector(v) => Json::obj()
            .with("kind", "vector")
            .with("vector", Json::Arr(v.iter().copied().map(complex).collect())),
        Witness::Markov {
            element: a,
            function,
            lhs,
            rhs,
        } => Json::obj()
            .with("kind", "markov")
            .with("element", element(a))
            .with("function", function.as_str())
            .with("lhs", *lhs)
            .with("rhs", *rhs),
        Witness::States(es) => Json::obj()
            .with("kind", "states")
            .with("densities", Json::Arr(es.iter().map(element).collect())),
        Witness::Note(s) => Json::obj().with("kind", "note").with("note", s.as_str()),
    }
}
