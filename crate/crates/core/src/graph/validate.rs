use std::fmt;

use super::{AttributeValue, ContourGraph, NodeId, NodeKind, PointKind};
use crate::graph::Attr;
use crate::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    AlternationBroken(NodeId, NodeId),
    MultipleStartPoints(Vec<NodeId>),
    Degree { node: NodeId, kind: NodeKind, degree: usize },
    Disconnected { components: usize },
    AttributeNotAllowed { node: NodeId, attr: Attr },
    AttributeType { node: NodeId, attr: Attr },
    InvalidRange { node: Option<NodeId>, name: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AlternationBroken(a, b) => write!(f, "alternation broken at ({a},{b})"),
            Violation::MultipleStartPoints(ids) => {
                let ids: Vec<String> = ids.iter().map(ToString::to_string).collect();
                write!(f, "more than one StartPoint: {}", ids.join(","))
            }
            Violation::Degree { node, kind, degree } => {
                let name = match kind {
                    NodeKind::Point(k) => k.name(),
                    NodeKind::Line => "Line",
                };
                write!(f, "node {node}: {name} has degree {degree}")
            }
            Violation::Disconnected { components } => {
                write!(f, "graph is disconnected ({components} components)")
            }
            Violation::AttributeNotAllowed { node, attr } => {
                write!(f, "node {node}: attribute {attr} not allowed on this kind")
            }
            Violation::AttributeType { node, attr } => {
                write!(f, "node {node}: attribute {attr} has the wrong value type")
            }
            Violation::InvalidRange { node: Some(n), name } => write!(f, "node {n}: inconsistent range in {name}"),
            Violation::InvalidRange { node: None, name } => write!(f, "metadata: inconsistent range in {name}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        let msgs: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        f.write_str(&msgs.join("; "))
    }
}

fn range_ok<F: Scalar>(v: &AttributeValue<F>) -> bool {
    match v {
        AttributeValue::Range(r) => r.is_consistent(),
        AttributeValue::Scalar(x) => x.is_finite(),
        _ => true,
    }
}

/// Checks every structural and attribute invariant of a contour graph.
pub fn validate<F: Scalar>(g: &ContourGraph<F>) -> ValidationReport {
    let mut violations = Vec::new();

    for e in g.edges() {
        let (a, b) = e.ends();
        let (ka, kb) = (g.kind(a).unwrap(), g.kind(b).unwrap());
        if ka.is_point() == kb.is_point() {
            violations.push(Violation::AlternationBroken(a, b));
        }
    }

    let starts: Vec<NodeId> =
        g.points().filter(|n| n.kind == NodeKind::Point(PointKind::StartPoint)).map(|n| n.id).collect();
    if starts.len() > 1 {
        violations.push(Violation::MultipleStartPoints(starts));
    }

    for n in g.nodes() {
        let degree = g.degree(n.id);
        let ok = match n.kind {
            NodeKind::Point(PointKind::EndPoint) => degree == 1,
            NodeKind::Point(PointKind::CornerPoint) => degree == 2,
            NodeKind::Point(PointKind::IntersectionPoint) => degree >= 3,
            // a lone StartPoint is the smallest valid non-empty graph
            NodeKind::Point(PointKind::StartPoint) => degree >= 1 || g.node_count() == 1,
            NodeKind::Line => degree == 1 || degree == 2,
        };
        if !ok {
            violations.push(Violation::Degree { node: n.id, kind: n.kind, degree });
        }

        for (&attr, value) in &n.attrs {
            if !attr.allowed_on(n.kind) {
                violations.push(Violation::AttributeNotAllowed { node: n.id, attr });
            } else if attr.class() != value.class() {
                violations.push(Violation::AttributeType { node: n.id, attr });
            } else if !range_ok(value) {
                violations.push(Violation::InvalidRange { node: Some(n.id), name: attr.name().into() });
            }
        }
    }

    for (key, value) in &g.metadata {
        let class_ok = key.class() == value.class();
        if !class_ok || !range_ok(value) {
            violations.push(Violation::InvalidRange { node: None, name: key.name().into() });
        }
    }

    let components = g.component_count();
    if components > 1 {
        violations.push(Violation::Disconnected { components });
    }

    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::Range;

    #[test]
    fn stroke_is_valid() {
        let g = stroke();
        assert_eq!((g.node_count(), g.edge_count()), (3, 2));
        assert!(validate(&g).is_ok());
    }

    #[test]
    fn empty_graph_is_valid() {
        assert!(validate(&ContourGraph::<f64>::new()).is_ok());
    }

    #[test]
    fn point_point_edge_breaks_alternation() {
        let mut g = stroke();
        let extra = g.add_point(PointKind::EndPoint, 1.0, 1.0);
        let sp = g.start_point().unwrap();
        g.add_edge(sp, extra);
        let report = validate(&g);
        let msg = report.to_string();
        assert!(msg.contains(&format!("alternation broken at ({sp},{extra})")), "{msg}");
    }

    #[test]
    fn two_start_points_rejected() {
        let mut g = stroke();
        let ep = g.points().find(|n| n.kind == NodeKind::Point(PointKind::EndPoint)).unwrap().id;
        g.set_point_kind(ep, PointKind::StartPoint);
        assert!(validate(&g).violations.iter().any(|v| matches!(v, Violation::MultipleStartPoints(_))));
    }

    #[test]
    fn disconnected_rejected() {
        let mut g = stroke();
        g.add_point(PointKind::EndPoint, 0.5, 0.5);
        let report = validate(&g);
        assert!(report.violations.iter().any(|v| matches!(v, Violation::Disconnected { components: 2 })));
    }

    #[test]
    fn degree_rules_enforced() {
        let (mut g, [_, ip, _, _]) = y_shape();
        g.set_point_kind(ip, PointKind::CornerPoint);
        assert!(validate(&g).violations.iter().any(|v| matches!(v, Violation::Degree { degree: 3, .. })));
    }

    #[test]
    fn angle_only_on_corner_points() {
        let mut g = stroke();
        let sp = g.start_point().unwrap();
        g.node_mut(sp).unwrap().attrs.insert(Attr::Angle, AttributeValue::Scalar(1.0));
        assert!(matches!(validate(&g).violations[..], [Violation::AttributeNotAllowed { attr: Attr::Angle, .. }]));
    }

    #[test]
    fn inconsistent_range_rejected() {
        let mut g = stroke();
        let sp = g.start_point().unwrap();
        let bad = Range { min: 1.0, max: 0.0, center: 0.5, count: 2 };
        g.node_mut(sp).unwrap().attrs.insert(Attr::NormalizedX, AttributeValue::Range(bad));
        assert!(!validate(&g).is_ok());
    }
}
