use rand::Rng;

use super::{Attr, AttributeValue, ContourGraph, MetaKey, NodeId, NodeKind, PointKind};
use crate::Scalar;

/// A random valid contour graph with `nodes` nodes (at least 1).
///
/// Grows a Point/Line tree from a StartPoint, optionally closes one cycle,
/// then assigns kinds by degree and random attributes. Useful for property
/// tests and benchmarks.
pub fn random_graph<F: Scalar, R: Rng>(rng: &mut R, nodes: usize, allow_cycle: bool) -> ContourGraph<F> {
    let mut g = ContourGraph::<F>::new();
    let coord = |rng: &mut R| F::lit(rng.random_range(-1.0..=1.0));
    let (x, y) = (coord(rng), coord(rng));
    g.add_point(PointKind::StartPoint, x, y);
    while g.node_count() < nodes.max(1) {
        let ids: Vec<NodeId> = g.node_ids().collect();
        let candidates: Vec<NodeId> =
            ids.into_iter().filter(|&id| g.kind(id).is_some_and(|k| k.is_point()) || g.degree(id) < 2).collect();
        let parent = candidates[rng.random_range(0..candidates.len())];
        let child = if g.kind(parent).is_some_and(|k| k.is_point()) {
            g.add_node(NodeKind::Line, Default::default())
        } else {
            let (x, y) = (coord(rng), coord(rng));
            g.add_point(PointKind::EndPoint, x, y)
        };
        g.add_edge(parent, child);
    }
    if allow_cycle && rng.random_bool(0.5) {
        let open: Vec<NodeId> = g.lines().filter(|l| g.degree(l.id) == 1).map(|l| l.id).collect();
        let points: Vec<NodeId> = g.points().map(|p| p.id).collect();
        if let Some(&line) = open.first() {
            let targets: Vec<NodeId> = points.into_iter().filter(|&p| !g.has_edge(p, line)).collect();
            if !targets.is_empty() {
                g.add_edge(line, targets[rng.random_range(0..targets.len())]);
            }
        }
    }
    g.reclassify_by_degree();
    let line_ids: Vec<NodeId> = g.lines().map(|l| l.id).collect();
    for id in line_ids {
        let (mx, my) = (coord(rng), coord(rng));
        let len = F::lit(rng.random_range(0.05..2.0));
        let q = rng.random_range(1..=4u8).to_string();
        let attrs = &mut g.node_mut(id).unwrap().attrs;
        attrs.insert(Attr::Length, AttributeValue::Scalar(len));
        attrs.insert(Attr::NormalizedMidX, AttributeValue::Scalar(mx));
        attrs.insert(Attr::NormalizedMidY, AttributeValue::Scalar(my));
        attrs.insert(Attr::Quadrant, AttributeValue::category(q));
    }
    let corners: Vec<NodeId> =
        g.points().filter(|p| p.kind == NodeKind::Point(PointKind::CornerPoint)).map(|p| p.id).collect();
    for id in corners {
        let a = F::lit(rng.random_range(0.3..3.0));
        g.node_mut(id).unwrap().attrs.insert(Attr::Angle, AttributeValue::Scalar(a));
    }
    g.metadata.insert(MetaKey::ContourType, AttributeValue::category(g.contour_type()));
    g.record_tallies();
    g
}
