use std::fmt::Write;

use super::{Attr, AttributeValue, ContourGraph, NodeKind};
use crate::Scalar;

fn length_label<F: Scalar>(v: Option<&AttributeValue<F>>) -> String {
    match v {
        Some(AttributeValue::Scalar(x)) => format!("len={:.3}", x.as_f64()),
        Some(AttributeValue::Range(r)) => format!("len∈[{:.3},{:.3}]", r.min.as_f64(), r.max.as_f64()),
        _ => "len=?".to_owned(),
    }
}

/// Renders the graph in DOT format. Points are labeled by kind, lines by length.
pub fn to_dot<F: Scalar>(g: &ContourGraph<F>, name: &str) -> String {
    let mut out = String::new();
    let name: String = name.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    let _ = writeln!(out, "graph \"{name}\" {{");
    for n in g.nodes() {
        let (label, shape) = match n.kind {
            NodeKind::Point(k) => (k.name().to_owned(), "ellipse"),
            NodeKind::Line => (length_label(n.attr(Attr::Length)), "box"),
        };
        let _ = writeln!(out, "  n{} [label=\"{}\", shape={}];", n.id, label, shape);
    }
    for e in g.edges() {
        let (a, b) = e.ends();
        let _ = writeln!(out, "  n{a} -- n{b};");
    }
    out.push_str("}\n");
    out
}
