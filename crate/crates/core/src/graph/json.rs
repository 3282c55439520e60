//! JSON graph documents.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "nodes": [{"id": 0, "kind": "point", "point_kind": "StartPoint",
//!              "attrs": {"normalized_x": 0.0, "normalized_y": -1.0}}],
//!   "edges": [[0, 1]],
//!   "metadata": {"contour_type": "OPEN", "endpoint_counts": {"min": 2, "max": 4, "center": 2.66666666667, "count": 3}}
//! }
//! ```
//!
//! Numeric attributes are plain numbers (scalars) or `{min, max, center,
//! count}` objects (ranges). Categories are strings and tag sets are arrays of
//! strings. Reals are written with 12 significant digits.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};

use super::{
    validate, Attr, AttrClass, AttributeValue, ContourGraph, GraphError, MetaKey, NodeId, NodeKind, NodeRecord,
    PointKind, Range,
};
use crate::Scalar;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct GraphDocument {
    pub format_version: u32,
    pub nodes: Vec<NodeDocument>,
    pub edges: Vec<[u32; 2]>,
    #[serde(default)]
    pub metadata: Map<String, Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct NodeDocument {
    pub id: u32,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_kind: Option<String>,
    #[serde(default)]
    pub attrs: Map<String, Value>,
}

/// Rounds to 12 significant digits.
pub(crate) fn round_sig(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

fn number(v: f64) -> Value {
    Number::from_f64(round_sig(v)).map_or(Value::Null, Value::Number)
}

pub(crate) fn value_to_json<F: Scalar>(v: &AttributeValue<F>) -> Value {
    match v {
        AttributeValue::Scalar(x) => number(x.as_f64()),
        AttributeValue::Range(r) => {
            let mut m = Map::new();
            m.insert("min".into(), number(r.min.as_f64()));
            m.insert("max".into(), number(r.max.as_f64()));
            m.insert("center".into(), number(r.center.as_f64()));
            m.insert("count".into(), Value::from(r.count));
            Value::Object(m)
        }
        AttributeValue::Category(s) => Value::String(s.clone()),
        AttributeValue::TagSet(t) => Value::Array(t.iter().cloned().map(Value::String).collect()),
    }
}

fn schema(msg: impl Into<String>) -> GraphError {
    GraphError::SchemaViolation(msg.into())
}

pub(crate) fn value_from_json<F: Scalar>(name: &str, class: AttrClass, v: &Value) -> Result<AttributeValue<F>, GraphError> {
    let real = |v: &Value, field: &str| {
        v.as_f64().map(F::lit).ok_or_else(|| schema(format!("{name}.{field}: expected a number")))
    };
    match (class, v) {
        (AttrClass::Numeric, Value::Number(_)) => Ok(AttributeValue::Scalar(real(v, "value")?)),
        (AttrClass::Numeric, Value::Object(m)) => {
            if let Some(extra) = m.keys().find(|k| !["min", "max", "center", "count"].contains(&k.as_str())) {
                return Err(schema(format!("{name}: unknown range field {extra:?}")));
            }
            let get = |k: &str| m.get(k).ok_or_else(|| schema(format!("{name}: range missing {k}")));
            let count = get("count")?
                .as_u64()
                .filter(|&c| c >= 1 && c <= u32::MAX as u64)
                .ok_or_else(|| schema(format!("{name}.count: expected a positive integer")))?;
            let r = Range {
                min: real(get("min")?, "min")?,
                max: real(get("max")?, "max")?,
                center: real(get("center")?, "center")?,
                count: count as u32,
            };
            Ok(AttributeValue::Range(r))
        }
        (AttrClass::Categorical, Value::String(s)) => Ok(AttributeValue::Category(s.clone())),
        (AttrClass::Tags, Value::Array(items)) => {
            let tags = items
                .iter()
                .map(|t| t.as_str().map(str::to_owned).ok_or_else(|| schema(format!("{name}: tags must be strings"))))
                .collect::<Result<BTreeSet<_>, _>>()?;
            if tags.len() != items.len() {
                return Err(schema(format!("{name}: duplicate tag")));
            }
            Ok(AttributeValue::TagSet(tags))
        }
        _ => Err(schema(format!("{name}: value has the wrong type"))),
    }
}

pub(crate) fn to_document<F: Scalar>(g: &ContourGraph<F>) -> GraphDocument {
    let nodes = g
        .nodes()
        .map(|n| NodeDocument {
            id: n.id.0,
            kind: if n.kind.is_point() { "point" } else { "line" }.into(),
            point_kind: n.kind.point_kind().map(|k| k.name().into()),
            attrs: n.attrs.iter().map(|(a, v)| (a.name().to_owned(), value_to_json(v))).collect(),
        })
        .collect();
    let edges = g.edges().map(|e| [e.ends().0 .0, e.ends().1 .0]).collect();
    let metadata = g.metadata.iter().map(|(k, v)| (k.name().to_owned(), value_to_json(v))).collect();
    GraphDocument { format_version: FORMAT_VERSION, nodes, edges, metadata }
}

pub(crate) fn from_document<F: Scalar>(doc: GraphDocument) -> Result<ContourGraph<F>, GraphError> {
    if doc.format_version != FORMAT_VERSION {
        return Err(schema(format!("unsupported format_version {}", doc.format_version)));
    }
    let mut g = ContourGraph::new();
    for nd in doc.nodes {
        let id = NodeId(nd.id);
        if g.contains(id) {
            return Err(schema(format!("duplicate node id {id}")));
        }
        let kind = match (nd.kind.as_str(), nd.point_kind.as_deref()) {
            ("point", Some(pk)) => NodeKind::Point(pk.parse::<PointKind>()?),
            ("point", None) => return Err(schema(format!("node {id}: point without point_kind"))),
            ("line", None) => NodeKind::Line,
            ("line", Some(_)) => return Err(schema(format!("node {id}: line with point_kind"))),
            (other, _) => return Err(schema(format!("node {id}: unknown kind {other:?}"))),
        };
        let mut attrs = BTreeMap::new();
        for (name, v) in &nd.attrs {
            let attr: Attr = name.parse()?;
            attrs.insert(attr, value_from_json(name, attr.class(), v)?);
        }
        g.insert_node(NodeRecord { id, kind, attrs });
    }
    for [a, b] in doc.edges {
        let (a, b) = (NodeId(a), NodeId(b));
        if !g.contains(a) || !g.contains(b) || a == b {
            return Err(schema(format!("edge ({a},{b}) references a missing node")));
        }
        g.add_edge(a, b);
    }
    for (name, v) in &doc.metadata {
        let key: MetaKey = name.parse()?;
        g.metadata.insert(key, value_from_json(name, key.class(), v)?);
    }
    let report = validate(&g);
    if !report.is_ok() {
        return Err(GraphError::InvalidGraph(report));
    }
    Ok(g)
}

/// Serializes a valid graph to a pretty-printed JSON document.
pub fn serialize<F: Scalar>(g: &ContourGraph<F>) -> Result<String, GraphError> {
    let report = validate(g);
    if !report.is_ok() {
        return Err(GraphError::InvalidGraph(report));
    }
    serde_json::to_string_pretty(&to_document(g)).map_err(|e| GraphError::MalformedDocument(e.to_string()))
}

/// Parses and validates a JSON graph document.
pub fn deserialize<F: Scalar>(doc: &str) -> Result<ContourGraph<F>, GraphError> {
    let value: Value = serde_json::from_str(doc).map_err(|e| GraphError::MalformedDocument(e.to_string()))?;
    let doc: GraphDocument = serde_json::from_value(value).map_err(|e| schema(e.to_string()))?;
    from_document(doc)
}
