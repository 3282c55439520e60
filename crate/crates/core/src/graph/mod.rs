//! Bipartite attributed contour graphs.
//!
//! A contour is a graph whose nodes are either critical points (`Point`) or
//! segments between them (`Line`). Every edge joins one Point and one Line, so
//! a walk always reads Point, Line, Point, ...

mod dot;
mod json;
mod random;
mod traversal;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Scalar;

pub use dot::to_dot;
pub(crate) use json::{from_document, to_document, GraphDocument};
pub use json::{deserialize, serialize, FORMAT_VERSION};
pub use random::random_graph;
pub use traversal::canonical_traversal;
pub use validate::{validate, ValidationReport, Violation};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(ValidationReport),
    #[error("graph has no StartPoint")]
    MissingStartPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PointKind {
    EndPoint,
    CornerPoint,
    IntersectionPoint,
    StartPoint,
}

impl PointKind {
    pub const ALL: [PointKind; 4] = [
        PointKind::EndPoint,
        PointKind::CornerPoint,
        PointKind::IntersectionPoint,
        PointKind::StartPoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PointKind::EndPoint => "EndPoint",
            PointKind::CornerPoint => "CornerPoint",
            PointKind::IntersectionPoint => "IntersectionPoint",
            PointKind::StartPoint => "StartPoint",
        }
    }

    /// Kind implied by the number of incident lines.
    pub fn from_degree(degree: usize) -> PointKind {
        match degree {
            0 | 1 => PointKind::EndPoint,
            2 => PointKind::CornerPoint,
            _ => PointKind::IntersectionPoint,
        }
    }
}

impl FromStr for PointKind {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PointKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| GraphError::SchemaViolation(format!("unknown point kind {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    Point(PointKind),
    Line,
}

impl NodeKind {
    pub fn is_point(self) -> bool {
        matches!(self, NodeKind::Point(_))
    }

    pub fn is_line(self) -> bool {
        self == NodeKind::Line
    }

    pub fn point_kind(self) -> Option<PointKind> {
        match self {
            NodeKind::Point(k) => Some(k),
            NodeKind::Line => None,
        }
    }
}

/// How values of an attribute are merged and compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttrClass {
    Numeric,
    Categorical,
    Tags,
}

/// The closed attribute vocabulary (format version 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Attr {
    NormalizedX,
    NormalizedY,
    /// Interior angle of a corner, radians.
    Angle,
    Length,
    Quadrant,
    HorizontalDirection,
    VerticalDirection,
    NormalizedMidX,
    NormalizedMidY,
    Tags,
}

impl Attr {
    pub const ALL: [Attr; 10] = [
        Attr::NormalizedX,
        Attr::NormalizedY,
        Attr::Angle,
        Attr::Length,
        Attr::Quadrant,
        Attr::HorizontalDirection,
        Attr::VerticalDirection,
        Attr::NormalizedMidX,
        Attr::NormalizedMidY,
        Attr::Tags,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Attr::NormalizedX => "normalized_x",
            Attr::NormalizedY => "normalized_y",
            Attr::Angle => "angle",
            Attr::Length => "length",
            Attr::Quadrant => "quadrant",
            Attr::HorizontalDirection => "horizontal_direction",
            Attr::VerticalDirection => "vertical_direction",
            Attr::NormalizedMidX => "normalized_mid_x",
            Attr::NormalizedMidY => "normalized_mid_y",
            Attr::Tags => "tags",
        }
    }

    pub fn class(self) -> AttrClass {
        match self {
            Attr::NormalizedX
            | Attr::NormalizedY
            | Attr::Angle
            | Attr::Length
            | Attr::NormalizedMidX
            | Attr::NormalizedMidY => AttrClass::Numeric,
            Attr::Quadrant | Attr::HorizontalDirection | Attr::VerticalDirection => {
                AttrClass::Categorical
            }
            Attr::Tags => AttrClass::Tags,
        }
    }

    /// Whether a node of `kind` may carry this attribute.
    pub fn allowed_on(self, kind: NodeKind) -> bool {
        match kind {
            NodeKind::Point(pk) => match self {
                Attr::NormalizedX | Attr::NormalizedY | Attr::Tags => true,
                Attr::Angle => pk == PointKind::CornerPoint,
                _ => false,
            },
            NodeKind::Line => !matches!(self, Attr::NormalizedX | Attr::NormalizedY | Attr::Angle),
        }
    }
}

impl fmt::Display for Attr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Attr {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Attr::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| GraphError::SchemaViolation(format!("unknown attribute {s:?}")))
    }
}

/// Graph-level metadata keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetaKey {
    Source,
    ContourType,
    EndpointCounts,
    CornerPointCounts,
    IntersectionPointCounts,
}

impl MetaKey {
    pub const ALL: [MetaKey; 5] = [
        MetaKey::Source,
        MetaKey::ContourType,
        MetaKey::EndpointCounts,
        MetaKey::CornerPointCounts,
        MetaKey::IntersectionPointCounts,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetaKey::Source => "source",
            MetaKey::ContourType => "contour_type",
            MetaKey::EndpointCounts => "endpoint_counts",
            MetaKey::CornerPointCounts => "corner_point_counts",
            MetaKey::IntersectionPointCounts => "intersection_point_counts",
        }
    }

    pub fn class(self) -> AttrClass {
        match self {
            MetaKey::Source | MetaKey::ContourType => AttrClass::Categorical,
            _ => AttrClass::Numeric,
        }
    }
}

impl FromStr for MetaKey {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MetaKey::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| GraphError::SchemaViolation(format!("unknown metadata key {s:?}")))
    }
}

/// A numeric attribute generalized over several samples.
///
/// `center` is the running mean of every contributing value and `count` the
/// number of contributions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range<F> {
    pub min: F,
    pub max: F,
    pub center: F,
    pub count: u32,
}

impl<F: Scalar> Range<F> {
    pub fn point(v: F) -> Self {
        Range { min: v, max: v, center: v, count: 1 }
    }

    pub fn contains(&self, v: F) -> bool {
        v >= self.min && v <= self.max
    }

    /// Distance from `v` to the closest bound, zero inside.
    pub fn distance_to(&self, v: F) -> F {
        if v < self.min {
            self.min - v
        } else if v > self.max {
            v - self.max
        } else {
            F::zero()
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.count >= 1
            && self.min <= self.center
            && self.center <= self.max
            && (self.count > 1 || (self.min == self.max && self.min == self.center))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AttributeValue<F> {
    Scalar(F),
    Range(Range<F>),
    Category(String),
    TagSet(BTreeSet<String>),
}

impl<F: Scalar> AttributeValue<F> {
    pub fn category(label: impl Into<String>) -> Self {
        AttributeValue::Category(label.into())
    }

    pub fn tags<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        AttributeValue::TagSet(labels.into_iter().map(Into::into).collect())
    }

    pub fn class(&self) -> AttrClass {
        match self {
            AttributeValue::Scalar(_) | AttributeValue::Range(_) => AttrClass::Numeric,
            AttributeValue::Category(_) => AttrClass::Categorical,
            AttributeValue::TagSet(_) => AttrClass::Tags,
        }
    }

    /// Representative numeric value: the scalar itself or the range center.
    pub fn numeric(&self) -> Option<F> {
        match self {
            AttributeValue::Scalar(v) => Some(*v),
            AttributeValue::Range(r) => Some(r.center),
            _ => None,
        }
    }

    pub fn as_range(&self) -> Option<Range<F>> {
        match self {
            AttributeValue::Scalar(v) => Some(Range::point(*v)),
            AttributeValue::Range(r) => Some(*r),
            _ => None,
        }
    }

    pub fn as_category(&self) -> Option<&str> {
        match self {
            AttributeValue::Category(s) => Some(s),
            _ => None,
        }
    }

    /// Scalars become degenerate ranges; everything else is unchanged.
    pub fn lifted(&self) -> Self {
        match self {
            AttributeValue::Scalar(v) => AttributeValue::Range(Range::point(*v)),
            other => other.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NodeRecord<F> {
    pub id: NodeId,
    pub kind: NodeKind,
    pub attrs: BTreeMap<Attr, AttributeValue<F>>,
}

impl<F: Scalar> NodeRecord<F> {
    pub fn attr(&self, a: Attr) -> Option<&AttributeValue<F>> {
        self.attrs.get(&a)
    }

    pub fn numeric(&self, a: Attr) -> Option<F> {
        self.attrs.get(&a).and_then(AttributeValue::numeric)
    }

    /// Position in normalized coordinates: the point itself, or a line's midpoint.
    pub fn position(&self) -> Option<(F, F)> {
        let (ax, ay) = match self.kind {
            NodeKind::Point(_) => (Attr::NormalizedX, Attr::NormalizedY),
            NodeKind::Line => (Attr::NormalizedMidX, Attr::NormalizedMidY),
        };
        Some((self.numeric(ax)?, self.numeric(ay)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(NodeId, NodeId);

impl Edge {
    pub fn new(a: NodeId, b: NodeId) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn ends(self) -> (NodeId, NodeId) {
        (self.0, self.1)
    }
}

/// Attributed bipartite graph of Point and Line nodes with undirected
/// `CONNECTED_TO` edges.
#[derive(Clone, Debug, PartialEq)]
pub struct ContourGraph<F> {
    nodes: BTreeMap<NodeId, NodeRecord<F>>,
    adjacency: BTreeMap<NodeId, BTreeSet<NodeId>>,
    pub metadata: BTreeMap<MetaKey, AttributeValue<F>>,
}

impl<F: Scalar> Default for ContourGraph<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Scalar> ContourGraph<F> {
    pub fn new() -> Self {
        ContourGraph { nodes: BTreeMap::new(), adjacency: BTreeMap::new(), metadata: BTreeMap::new() }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn next_id(&self) -> NodeId {
        self.nodes.keys().next_back().map_or(NodeId(0), |id| NodeId(id.0 + 1))
    }

    pub fn add_node(&mut self, kind: NodeKind, attrs: BTreeMap<Attr, AttributeValue<F>>) -> NodeId {
        let id = self.next_id();
        self.insert_node(NodeRecord { id, kind, attrs });
        id
    }

    pub fn add_point(&mut self, kind: PointKind, x: F, y: F) -> NodeId {
        let attrs = BTreeMap::from([
            (Attr::NormalizedX, AttributeValue::Scalar(x)),
            (Attr::NormalizedY, AttributeValue::Scalar(y)),
        ]);
        self.add_node(NodeKind::Point(kind), attrs)
    }

    /// Inserts `node` under its own id, replacing any node with that id.
    pub fn insert_node(&mut self, node: NodeRecord<F>) {
        self.adjacency.entry(node.id).or_default();
        self.nodes.insert(node.id, node);
    }

    /// Adds an undirected edge. Both ends must exist; self loops are ignored.
    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> bool {
        if a == b || !self.nodes.contains_key(&a) || !self.nodes.contains_key(&b) {
            return false;
        }
        let fresh = self.adjacency.entry(a).or_default().insert(b);
        self.adjacency.entry(b).or_default().insert(a);
        fresh
    }

    pub fn remove_edge(&mut self, a: NodeId, b: NodeId) -> bool {
        let removed = self.adjacency.get_mut(&a).is_some_and(|s| s.remove(&b));
        if let Some(s) = self.adjacency.get_mut(&b) {
            s.remove(&a);
        }
        removed
    }

    pub fn remove_node(&mut self, id: NodeId) -> Option<NodeRecord<F>> {
        let node = self.nodes.remove(&id)?;
        if let Some(nbrs) = self.adjacency.remove(&id) {
            for n in nbrs {
                if let Some(s) = self.adjacency.get_mut(&n) {
                    s.remove(&id);
                }
            }
        }
        Some(node)
    }

    pub fn node(&self, id: NodeId) -> Option<&NodeRecord<F>> {
        self.nodes.get(&id)
    }

    pub fn node_mut(&mut self, id: NodeId) -> Option<&mut NodeRecord<F>> {
        self.nodes.get_mut(&id)
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.nodes.contains_key(&id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &NodeRecord<F>> + '_ {
        self.nodes.values()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.keys().copied()
    }

    pub fn nodes_mut(&mut self) -> impl Iterator<Item = &mut NodeRecord<F>> + '_ {
        self.nodes.values_mut()
    }

    /// Edges as `(smaller id, larger id)`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adjacency
            .iter()
            .flat_map(|(&a, nbrs)| nbrs.iter().filter(move |&&b| a < b).map(move |&b| Edge(a, b)))
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.adjacency.get(&a).is_some_and(|s| s.contains(&b))
    }

    pub fn neighbors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adjacency.get(&id).into_iter().flat_map(|s| s.iter().copied())
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.adjacency.get(&id).map_or(0, BTreeSet::len)
    }

    pub fn kind(&self, id: NodeId) -> Option<NodeKind> {
        self.nodes.get(&id).map(|n| n.kind)
    }

    pub fn set_point_kind(&mut self, id: NodeId, kind: PointKind) {
        if let Some(n) = self.nodes.get_mut(&id) {
            if n.kind.is_point() {
                n.kind = NodeKind::Point(kind);
                if kind != PointKind::CornerPoint {
                    n.attrs.remove(&Attr::Angle);
                }
            }
        }
    }

    pub fn start_point(&self) -> Option<NodeId> {
        self.nodes
            .values()
            .find(|n| n.kind == NodeKind::Point(PointKind::StartPoint))
            .map(|n| n.id)
    }

    pub fn points(&self) -> impl Iterator<Item = &NodeRecord<F>> + '_ {
        self.nodes.values().filter(|n| n.kind.is_point())
    }

    pub fn lines(&self) -> impl Iterator<Item = &NodeRecord<F>> + '_ {
        self.nodes.values().filter(|n| n.kind.is_line())
    }

    pub fn count_kind(&self, kind: PointKind) -> usize {
        self.points().filter(|n| n.kind == NodeKind::Point(kind)).count()
    }

    /// Number of nodes plus number of edges.
    pub fn structural_complexity(&self) -> usize {
        self.node_count() + self.edge_count()
    }

    /// Number of connected components (zero for the empty graph).
    pub fn component_count(&self) -> usize {
        let mut seen = BTreeSet::new();
        let mut components = 0;
        for &start in self.nodes.keys() {
            if !seen.insert(start) {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            while let Some(n) = stack.pop() {
                for m in self.neighbors(n) {
                    if seen.insert(m) {
                        stack.push(m);
                    }
                }
            }
        }
        components
    }

    /// Reassigns EndPoint/CornerPoint/IntersectionPoint kinds from current
    /// degrees. StartPoints are left alone.
    pub fn reclassify_by_degree(&mut self) {
        let updates: Vec<(NodeId, PointKind)> = self
            .points()
            .filter(|n| n.kind != NodeKind::Point(PointKind::StartPoint))
            .map(|n| (n.id, PointKind::from_degree(self.degree(n.id))))
            .filter(|&(id, k)| self.kind(id) != Some(NodeKind::Point(k)))
            .collect();
        for (id, k) in updates {
            self.set_point_kind(id, k);
        }
    }

    /// Critical-point tallies written to `endpoint_counts` etc.
    ///
    /// The StartPoint is counted as an endpoint when it terminates a stroke
    /// (degree 1), and as an intersection when three or more lines meet there.
    pub fn critical_tallies(&self) -> (usize, usize, usize) {
        let mut tally = (0, 0, 0);
        for n in self.points() {
            let kind = match n.kind {
                NodeKind::Point(PointKind::StartPoint) => PointKind::from_degree(self.degree(n.id)),
                NodeKind::Point(k) => k,
                NodeKind::Line => unreachable!(),
            };
            match kind {
                PointKind::EndPoint => tally.0 += 1,
                PointKind::CornerPoint => tally.1 += 1,
                PointKind::IntersectionPoint => tally.2 += 1,
                PointKind::StartPoint => {}
            }
        }
        tally
    }

    /// Writes the critical-point tallies into the metadata as scalars.
    pub fn record_tallies(&mut self) {
        let (ep, cp, ip) = self.critical_tallies();
        self.metadata.insert(MetaKey::EndpointCounts, AttributeValue::Scalar(F::lit(ep as f64)));
        self.metadata.insert(MetaKey::CornerPointCounts, AttributeValue::Scalar(F::lit(cp as f64)));
        self.metadata
            .insert(MetaKey::IntersectionPointCounts, AttributeValue::Scalar(F::lit(ip as f64)));
    }

    /// `CLOSED` when the contour contains a cycle, `OPEN` otherwise.
    pub fn contour_type(&self) -> &'static str {
        if !self.is_empty() && self.edge_count() + self.component_count() > self.node_count() {
            "CLOSED"
        } else {
            "OPEN"
        }
    }

    /// Converts the scalar type of every numeric attribute.
    pub fn cast<G: Scalar>(&self) -> ContourGraph<G> {
        let conv = |v: &AttributeValue<F>| match v {
            AttributeValue::Scalar(x) => AttributeValue::Scalar(G::lit(x.as_f64())),
            AttributeValue::Range(r) => AttributeValue::Range(Range {
                min: G::lit(r.min.as_f64()),
                max: G::lit(r.max.as_f64()),
                center: G::lit(r.center.as_f64()),
                count: r.count,
            }),
            AttributeValue::Category(s) => AttributeValue::Category(s.clone()),
            AttributeValue::TagSet(t) => AttributeValue::TagSet(t.clone()),
        };
        ContourGraph {
            nodes: self
                .nodes
                .iter()
                .map(|(&id, n)| {
                    let attrs = n.attrs.iter().map(|(&a, v)| (a, conv(v))).collect();
                    (id, NodeRecord { id, kind: n.kind, attrs })
                })
                .collect(),
            adjacency: self.adjacency.clone(),
            metadata: self.metadata.iter().map(|(&k, v)| (k, conv(v))).collect(),
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// `SP -- L -- EP`, a vertical stroke.
    pub fn stroke() -> ContourGraph<f64> {
        let mut g = ContourGraph::new();
        let sp = g.add_point(PointKind::StartPoint, 0.0, -1.0);
        let l = g.add_node(NodeKind::Line, line_attrs(2.0, "4", 0.0, 0.0));
        let ep = g.add_point(PointKind::EndPoint, 0.0, 1.0);
        g.add_edge(sp, l);
        g.add_edge(l, ep);
        g.metadata.insert(MetaKey::ContourType, AttributeValue::category("OPEN"));
        g.record_tallies();
        g
    }

    pub fn line_attrs(len: f64, quadrant: &str, mx: f64, my: f64) -> BTreeMap<Attr, AttributeValue<f64>> {
        BTreeMap::from([
            (Attr::Length, AttributeValue::Scalar(len)),
            (Attr::Quadrant, AttributeValue::category(quadrant)),
            (Attr::NormalizedMidX, AttributeValue::Scalar(mx)),
            (Attr::NormalizedMidY, AttributeValue::Scalar(my)),
        ])
    }

    /// Y shape: StartPoint at the bottom, two arms meeting at an intersection.
    ///
    /// Returns the graph and the ids `(sp, ip, left_ep, right_ep)`.
    pub fn y_shape() -> (ContourGraph<f64>, [NodeId; 4]) {
        let mut g = ContourGraph::new();
        let sp = g.add_point(PointKind::StartPoint, 0.0, 1.0);
        let ip = g.add_point(PointKind::IntersectionPoint, 0.0, 0.0);
        let left = g.add_point(PointKind::EndPoint, -1.0, -1.0);
        let right = g.add_point(PointKind::EndPoint, 1.0, -1.0);
        let stem = g.add_node(NodeKind::Line, line_attrs(1.0, "1", 0.0, 0.5));
        let arm_l = g.add_node(NodeKind::Line, line_attrs(1.4, "3", -0.5, -0.5));
        let arm_r = g.add_node(NodeKind::Line, line_attrs(1.4, "2", 0.5, -0.5));
        for (a, b) in [(sp, stem), (stem, ip), (ip, arm_l), (arm_l, left), (ip, arm_r), (arm_r, right)] {
            g.add_edge(a, b);
        }
        g.record_tallies();
        (g, [sp, ip, left, right])
    }
}
