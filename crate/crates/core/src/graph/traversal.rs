use std::collections::BTreeSet;

use super::{Attr, AttributeValue, ContourGraph, GraphError, NodeId};
use crate::Scalar;

/// Quadrant label of a line, 5 when absent or generalized away.
fn quadrant_rank<F: Scalar>(g: &ContourGraph<F>, id: NodeId) -> u8 {
    g.node(id)
        .and_then(|n| n.attr(Attr::Quadrant))
        .and_then(AttributeValue::as_category)
        .and_then(|q| q.parse::<u8>().ok())
        .unwrap_or(5)
}

/// Direction from `from` to `to` as a fraction of a full turn, in `[0, 1)`.
fn direction_fraction<F: Scalar>(g: &ContourGraph<F>, from: NodeId, to: NodeId) -> f64 {
    let pos = |id| g.node(id).and_then(|n| n.position()).map(|(x, y)| (x.as_f64(), y.as_f64()));
    match (pos(from), pos(to)) {
        (Some((x0, y0)), Some((x1, y1))) if (x0, y0) != (x1, y1) => {
            let a = (y1 - y0).atan2(x1 - x0);
            a.rem_euclid(std::f64::consts::TAU) / std::f64::consts::TAU
        }
        _ => 0.0,
    }
}

/// Depth-first order from the StartPoint.
///
/// Unvisited neighbors are taken in order of (line quadrant, direction
/// angle, node id), so a graph always yields the same sequence.
pub fn canonical_traversal<F: Scalar>(g: &ContourGraph<F>) -> Result<Vec<NodeId>, GraphError> {
    let start = g.start_point().ok_or(GraphError::MissingStartPoint)?;
    let mut order = Vec::with_capacity(g.node_count());
    let mut seen = BTreeSet::new();
    let mut stack = vec![start];
    while let Some(n) = stack.pop() {
        if !seen.insert(n) {
            continue;
        }
        order.push(n);
        let mut next: Vec<(u8, f64, NodeId)> = g
            .neighbors(n)
            .filter(|m| !seen.contains(m))
            .map(|m| (quadrant_rank(g, m), direction_fraction(g, n, m), m))
            .collect();
        next.sort_by(|a, b| {
            a.0.cmp(&b.0).then_with(|| a.1.total_cmp(&b.1)).then_with(|| a.2.cmp(&b.2))
        });
        // reversed so the smallest key is popped first
        stack.extend(next.into_iter().rev().map(|t| t.2));
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::{deserialize, serialize, NodeKind, PointKind};

    #[test]
    fn stroke_order() {
        let g = stroke();
        let order = canonical_traversal(&g).unwrap();
        let kinds: Vec<_> = order.iter().map(|&id| g.kind(id).unwrap()).collect();
        assert_eq!(
            kinds,
            [NodeKind::Point(PointKind::StartPoint), NodeKind::Line, NodeKind::Point(PointKind::EndPoint)]
        );
    }

    #[test]
    fn stable_across_serialization() {
        let (g, _) = y_shape();
        let back = deserialize::<f64>(&serialize(&g).unwrap()).unwrap();
        assert_eq!(canonical_traversal(&g).unwrap(), canonical_traversal(&back).unwrap());
    }

    #[test]
    fn smaller_quadrant_branch_first() {
        // right arm has quadrant 2, left arm quadrant 3
        let (g, [sp, ip, left, right]) = y_shape();
        let order = canonical_traversal(&g).unwrap();
        let pos = |id| order.iter().position(|&n| n == id).unwrap();
        assert_eq!(order[0], sp);
        assert!(pos(ip) < pos(right));
        assert!(pos(right) < pos(left));
        assert_eq!(order.len(), g.node_count());
    }

    #[test]
    fn missing_start_point() {
        let (mut g, [sp, ..]) = y_shape();
        g.set_point_kind(sp, PointKind::EndPoint);
        assert!(matches!(canonical_traversal(&g), Err(GraphError::MissingStartPoint)));
    }
}
