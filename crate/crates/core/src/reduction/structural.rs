use std::collections::BTreeMap;

use super::merge::merge_attrs;
use super::ReductionError;
use crate::graph::{AttributeValue, ContourGraph, NodeId, NodeKind, PointKind};
use crate::Scalar;

/// Deletes an EndPoint together with the path to the nearest other critical
/// point, which survives and is reclassified by its new degree.
pub fn remove_endpoint_branch<F: Scalar>(
    g: &ContourGraph<F>,
    endpoint: NodeId,
) -> Result<ContourGraph<F>, ReductionError> {
    if g.kind(endpoint) != Some(NodeKind::Point(PointKind::EndPoint)) {
        return Err(ReductionError::NotAnEndpoint(endpoint));
    }
    let mut out = g.clone();
    let mut prev = endpoint;
    let mut cur = g.neighbors(endpoint).next();
    out.remove_node(endpoint);
    while let Some(n) = cur {
        if g.kind(n) != Some(NodeKind::Line) {
            break;
        }
        cur = g.neighbors(n).find(|&m| m != prev);
        out.remove_node(n);
        prev = n;
    }
    out.reclassify_by_degree();
    Ok(out)
}

/// Disjoint-set forest over indices.
struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let p = self.0[i];
        if p == i {
            return i;
        }
        let r = self.find(p);
        self.0[i] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // the smaller index stays the root so groups are named deterministically
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.0[hi] = lo;
    }
}

/// Merges IntersectionPoints lying within `threshold` of each other.
///
/// Each group collapses onto its smallest id with merged attributes, so the
/// position becomes a range spanning the sources. Lines that would join the
/// merged node to itself are dropped. Points are reclassified afterwards.
pub fn merge_intersections<F: Scalar>(g: &ContourGraph<F>, threshold: F) -> ContourGraph<F> {
    let ips: Vec<NodeId> =
        g.points().filter(|n| n.kind == NodeKind::Point(PointKind::IntersectionPoint)).map(|n| n.id).collect();
    let pos: Vec<Option<(F, F)>> = ips.iter().map(|&id| g.node(id).and_then(|n| n.position())).collect();
    let mut uf = UnionFind((0..ips.len()).collect());
    for i in 0..ips.len() {
        for j in i + 1..ips.len() {
            if let (Some((xa, ya)), Some((xb, yb))) = (pos[i], pos[j]) {
                if ((xa - xb).powi(2) + (ya - yb).powi(2)).sqrt() <= threshold {
                    uf.union(i, j);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
    for (i, &id) in ips.iter().enumerate() {
        let root = uf.find(i);
        groups.entry(root).or_default().push(id);
    }
    let mut out = g.clone();
    for members in groups.values().filter(|m| m.len() > 1) {
        let keep = members[0];
        for &other in &members[1..] {
            let attrs = merge_attrs(&out.node(keep).unwrap().attrs, &g.node(other).unwrap().attrs);
            out.node_mut(keep).unwrap().attrs = attrs;
            let lines: Vec<NodeId> = out.neighbors(other).collect();
            out.remove_node(other);
            for l in lines {
                if out.has_edge(keep, l) {
                    // both ends of this line now sit on the merged node
                    out.remove_node(l);
                } else {
                    out.add_edge(keep, l);
                }
            }
        }
        // every position component becomes a range, even when it did not vary
        for v in out.node_mut(keep).unwrap().attrs.values_mut() {
            if let AttributeValue::Scalar(_) = v {
                *v = v.lifted();
            }
        }
    }
    out.reclassify_by_degree();
    out
}
