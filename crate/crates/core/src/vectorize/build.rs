use std::collections::{BTreeMap, VecDeque};

use super::bitmap::Pixel;
use super::critical::{CriticalKind, Polyline, RawCriticalPoint};
use super::normalize::{directions_of, quadrant_of};
use super::VectorizeError;
use crate::graph::{Attr, AttributeValue, ContourGraph, MetaKey, NodeId, NodeKind, PointKind};
use crate::Scalar;

/// Pixel at half the arclength, linearly interpolated.
fn arclength_midpoint(pixels: &[Pixel]) -> (f64, f64) {
    let total: f64 = pixels.windows(2).map(|w| w[0].dist(w[1])).sum();
    let half = total / 2.0;
    let mut acc = 0.0;
    for w in pixels.windows(2) {
        let d = w[0].dist(w[1]);
        if acc + d >= half && d > 0.0 {
            let t = (half - acc) / d;
            return (w[0].x as f64 + t * (w[1].x - w[0].x) as f64, w[0].y as f64 + t * (w[1].y - w[0].y) as f64);
        }
        acc += d;
    }
    let p = pixels[0];
    (p.x as f64, p.y as f64)
}

/// Builds the bipartite graph in pixel coordinates.
///
/// Each critical point becomes a Point node and each polyline a Line node
/// joined to its two bounding points. Junctions left with one or two lines
/// are reclassified by degree. The StartPoint is the topmost (then leftmost)
/// EndPoint, or the topmost point of a closed contour. Line directions are
/// oriented away from the StartPoint.
pub fn build_graph<F: Scalar>(
    lines: &[Polyline],
    criticals: &[RawCriticalPoint],
) -> Result<ContourGraph<F>, VectorizeError> {
    let mut g = ContourGraph::<F>::new();
    let mut point_ids: BTreeMap<usize, NodeId> = BTreeMap::new();
    let mut used: Vec<usize> = lines.iter().flat_map(|l| [l.start, l.end]).collect();
    if lines.is_empty() {
        used.extend(0..criticals.len());
    }
    used.sort_unstable();
    used.dedup();
    for i in used {
        let c = &criticals[i];
        let kind = match c.kind {
            CriticalKind::Endpoint => PointKind::EndPoint,
            CriticalKind::Junction => PointKind::IntersectionPoint,
            CriticalKind::Corner | CriticalKind::LoopAnchor => PointKind::CornerPoint,
        };
        let id = g.add_point(kind, F::lit(c.pixel.x as f64), F::lit(c.pixel.y as f64));
        if let (CriticalKind::Corner, Some(a)) = (c.kind, c.angle) {
            g.node_mut(id).unwrap().attrs.insert(Attr::Angle, AttributeValue::Scalar(F::lit(a)));
        }
        point_ids.insert(i, id);
    }
    for line in lines {
        let (mx, my) = arclength_midpoint(&line.pixels);
        let attrs = BTreeMap::from([
            (Attr::Length, AttributeValue::Scalar(F::lit(line.length()))),
            (Attr::NormalizedMidX, AttributeValue::Scalar(F::lit(mx))),
            (Attr::NormalizedMidY, AttributeValue::Scalar(F::lit(my))),
        ]);
        let id = g.add_node(NodeKind::Line, attrs);
        g.add_edge(point_ids[&line.start], id);
        g.add_edge(id, point_ids[&line.end]);
    }

    let components = g.component_count();
    if components > 1 {
        return Err(VectorizeError::DisconnectedGraph { components });
    }
    if g.is_empty() {
        return Err(VectorizeError::EmptySkeleton);
    }

    g.reclassify_by_degree();
    let start = choose_start_point(&g);
    g.set_point_kind(start, PointKind::StartPoint);
    orient_lines(&mut g, start);

    g.metadata.insert(MetaKey::ContourType, AttributeValue::category(g.contour_type()));
    g.record_tallies();
    Ok(g)
}

fn choose_start_point<F: Scalar>(g: &ContourGraph<F>) -> NodeId {
    let key = |id: NodeId| {
        let (x, y) = g.node(id).unwrap().position().unwrap();
        (y.as_f64(), x.as_f64(), id)
    };
    let smallest = |ids: Vec<NodeId>| {
        ids.into_iter().min_by(|&a, &b| {
            let (ka, kb) = (key(a), key(b));
            ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1)).then(ka.2.cmp(&kb.2))
        })
    };
    let endpoints: Vec<NodeId> =
        g.points().filter(|n| n.kind == NodeKind::Point(PointKind::EndPoint)).map(|n| n.id).collect();
    smallest(endpoints).or_else(|| smallest(g.points().map(|n| n.id).collect())).expect("graph has a point")
}

/// Sets each line's quadrant and direction labels from its chord, oriented
/// away from `start`: BFS depth decides which end of a line is its origin.
pub(crate) fn orient_lines<F: Scalar>(g: &mut ContourGraph<F>, start: NodeId) {
    let mut depth: BTreeMap<NodeId, usize> = BTreeMap::from([(start, 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(n) = queue.pop_front() {
        let d = depth[&n];
        for m in g.neighbors(n).collect::<Vec<_>>() {
            depth.entry(m).or_insert_with(|| {
                queue.push_back(m);
                d + 1
            });
        }
    }
    let line_ids: Vec<NodeId> = g.lines().map(|n| n.id).collect();
    for id in line_ids {
        let mut ends: Vec<NodeId> = g.neighbors(id).collect();
        ends.sort_by_key(|e| (depth.get(e).copied().unwrap_or(usize::MAX), *e));
        let pos = |n: NodeId| g.node(n).and_then(|r| r.position());
        let vector = match ends.as_slice() {
            [a, b] => pos(*a).zip(pos(*b)).map(|((x0, y0), (x1, y1))| (x1 - x0, y1 - y0)),
            [a] => pos(*a).zip(g.node(id).unwrap().position()).map(|((x0, y0), (x1, y1))| (x1 - x0, y1 - y0)),
            _ => None,
        };
        let Some((dx, dy)) = vector else { continue };
        let (Ok(q), Ok((h, v))) = (quadrant_of(dx, dy), directions_of(dx, dy)) else { continue };
        let attrs = &mut g.node_mut(id).unwrap().attrs;
        attrs.insert(Attr::Quadrant, AttributeValue::category(q.to_string()));
        attrs.insert(Attr::HorizontalDirection, AttributeValue::category(h.name()));
        attrs.insert(Attr::VerticalDirection, AttributeValue::category(v.name()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate;
    use crate::vectorize::{extract_critical_points, split_at_corners, trace_segments, Bitmap};

    fn graph_of(rows: &[&str]) -> Result<ContourGraph<f64>, VectorizeError> {
        let skel = Bitmap::from_ascii(rows);
        let c = extract_critical_points(&skel);
        let (lines, c) = trace_segments(&skel, &c);
        let (lines, c) = split_at_corners(&lines, &c, 45.0, 5);
        build_graph(&lines, &c)
    }

    #[test]
    fn straight_stroke() {
        let g = graph_of(&["......", ".####.", "......"]).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (3, 2));
        let sp = g.start_point().unwrap();
        assert_eq!(g.node(sp).unwrap().position(), Some((1.0, 1.0)));
        let line = g.lines().next().unwrap();
        assert_eq!(line.attr(Attr::Quadrant).and_then(AttributeValue::as_category), Some("1"));
        assert_eq!(line.attr(Attr::HorizontalDirection).and_then(AttributeValue::as_category), Some("Right"));
        assert!(validate(&g).is_ok());
    }

    #[test]
    fn two_blobs() {
        let err = graph_of(&["##....", "......", "....##"]).unwrap_err();
        assert_eq!(err, VectorizeError::DisconnectedGraph { components: 2 });
    }

    #[test]
    fn plus_sign() {
        let g = graph_of(&[
            ".........", "....#....", "....#....", "....#....", ".#######.", "....#....", "....#....", "....#....",
            ".........",
        ])
        .unwrap();
        assert_eq!(g.count_kind(PointKind::IntersectionPoint), 1);
        let ip = g.points().find(|n| n.kind == NodeKind::Point(PointKind::IntersectionPoint)).unwrap().id;
        assert_eq!(g.degree(ip), 4);
        assert!(g.neighbors(ip).all(|n| g.kind(n) == Some(NodeKind::Line)));
        assert_eq!(g.count_kind(PointKind::EndPoint), 3);
        assert_eq!(g.count_kind(PointKind::StartPoint), 1);
        // the top arm's tip is the StartPoint
        let sp = g.start_point().unwrap();
        assert_eq!(g.node(sp).unwrap().position(), Some((4.0, 1.0)));
        assert!(validate(&g).is_ok());
    }
}
