use std::collections::BTreeMap;

use super::{CostConfig, EditOp};
use crate::graph::{AttributeValue, ContourGraph, NodeId, NodeRecord};
use crate::Scalar;

/// Cost of relabeling test node `u` as concept node `v`.
///
/// Numbers inside the concept's range are free; outside they cost the
/// weighted distance to the nearest bound. Labels must match exactly.
/// Attributes on one side only cost `weight * presence_penalty`. Lines and
/// Points never substitute for each other.
pub fn node_subst_cost<F: Scalar>(u: &NodeRecord<F>, v: &NodeRecord<F>, cfg: &CostConfig<F>) -> F {
    if u.kind.is_line() != v.kind.is_line() {
        return cfg.infinity;
    }
    let mut total = F::zero();
    if u.kind != v.kind {
        total = total + cfg.point_kind_mismatch;
    }
    let mut names: Vec<_> = u.attrs.keys().chain(v.attrs.keys()).copied().collect();
    names.sort_unstable();
    names.dedup();
    for attr in names {
        let w = cfg.weight(attr.name());
        let c = match (u.attrs.get(&attr), v.attrs.get(&attr)) {
            (Some(a), Some(b)) => match (a, b) {
                (AttributeValue::Category(x), AttributeValue::Category(y)) => {
                    if x == y {
                        F::zero()
                    } else {
                        cfg.infinity
                    }
                }
                (AttributeValue::TagSet(x), AttributeValue::TagSet(y)) => {
                    // the concept's tags are the ones all its samples shared
                    if y.is_subset(x) {
                        F::zero()
                    } else {
                        cfg.infinity
                    }
                }
                _ => match (a.numeric(), b.as_range()) {
                    (Some(x), Some(r)) => w * r.distance_to(x),
                    _ => cfg.infinity,
                },
            },
            _ => w * cfg.presence_penalty,
        };
        total = total + c;
    }
    total.min(cfg.infinity)
}

/// Both graphs flattened to indices, with every cost precomputed in f64.
pub(crate) struct Problem<'a, F> {
    pub g: &'a ContourGraph<F>,
    pub c: &'a ContourGraph<F>,
    pub g_ids: Vec<NodeId>,
    pub c_ids: Vec<NodeId>,
    pub subst: Vec<Vec<f64>>,
    pub del: Vec<f64>,
    pub ins: Vec<f64>,
    pub edge_del: f64,
    pub edge_ins: f64,
    pub infinity: f64,
    pub g_adj: Vec<Vec<bool>>,
    pub c_adj: Vec<Vec<bool>>,
    pub g_edges: Vec<(usize, usize)>,
    pub c_edges: Vec<(usize, usize)>,
    cfg: &'a CostConfig<F>,
}

fn adjacency<F: Scalar>(g: &ContourGraph<F>, ids: &[NodeId]) -> (Vec<Vec<bool>>, Vec<(usize, usize)>) {
    let index: BTreeMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let n = ids.len();
    let mut adj = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for e in g.edges() {
        let (a, b) = e.ends();
        let (i, j) = (index[&a], index[&b]);
        adj[i][j] = true;
        adj[j][i] = true;
        edges.push((i.min(j), i.max(j)));
    }
    edges.sort_unstable();
    (adj, edges)
}

impl<'a, F: Scalar> Problem<'a, F> {
    pub fn new(g: &'a ContourGraph<F>, g_ids: Vec<NodeId>, c: &'a ContourGraph<F>, cfg: &'a CostConfig<F>) -> Self {
        let c_ids: Vec<NodeId> = c.node_ids().collect();
        let subst = g_ids
            .iter()
            .map(|&a| {
                let u = g.node(a).unwrap();
                c_ids.iter().map(|&b| node_subst_cost(u, c.node(b).unwrap(), cfg).as_f64()).collect()
            })
            .collect();
        let (g_adj, g_edges) = adjacency(g, &g_ids);
        let (c_adj, c_edges) = adjacency(c, &c_ids);
        Problem {
            g,
            c,
            del: vec![cfg.node_delete_cost.as_f64(); g_ids.len()],
            ins: vec![cfg.node_insert_cost.as_f64(); c_ids.len()],
            g_ids,
            c_ids,
            subst,
            edge_del: cfg.edge_delete_cost.as_f64(),
            edge_ins: cfg.edge_insert_cost.as_f64(),
            infinity: cfg.infinity.as_f64(),
            g_adj,
            c_adj,
            g_edges,
            c_edges,
            cfg,
        }
    }

    /// Whether `g_ids[i]` may be substituted by `c_ids[j]` at all.
    pub fn allowed(&self, i: usize, j: usize) -> bool {
        self.subst[i][j] < self.infinity
    }

    /// Total cost of a complete mapping (`None` = deleted), in f64.
    pub fn evaluate(&self, mapping: &[Option<usize>]) -> f64 {
        self.edit_ops(mapping).iter().map(|op| op.cost().as_f64()).sum()
    }

    /// The edit path of a complete mapping in canonical order: node
    /// operations by test index, insertions by concept index, then edge
    /// deletions and insertions in sorted order.
    pub fn edit_ops(&self, mapping: &[Option<usize>]) -> Vec<EditOp<F>> {
        let mut ops = Vec::new();
        let mut image = vec![None; self.c_ids.len()];
        for (i, m) in mapping.iter().enumerate() {
            match *m {
                Some(j) => {
                    image[j] = Some(i);
                    let cost = node_subst_cost(
                        self.g.node(self.g_ids[i]).unwrap(),
                        self.c.node(self.c_ids[j]).unwrap(),
                        self.cfg,
                    );
                    ops.push(EditOp::SubstituteNode { test: self.g_ids[i], concept: self.c_ids[j], cost });
                }
                None => ops.push(EditOp::DeleteNode { test: self.g_ids[i], cost: self.cfg.node_delete_cost }),
            }
        }
        for (j, pre) in image.iter().enumerate() {
            if pre.is_none() {
                ops.push(EditOp::InsertNode { concept: self.c_ids[j], cost: self.cfg.node_insert_cost });
            }
        }
        for &(a, b) in &self.g_edges {
            let kept = matches!((mapping[a], mapping[b]), (Some(x), Some(y)) if self.c_adj[x][y]);
            if !kept {
                ops.push(EditOp::DeleteEdge { test: (self.g_ids[a], self.g_ids[b]), cost: self.cfg.edge_delete_cost });
            }
        }
        for &(x, y) in &self.c_edges {
            let kept = matches!((image[x], image[y]), (Some(a), Some(b)) if self.g_adj[a][b]);
            if !kept {
                ops.push(EditOp::InsertEdge {
                    concept: (self.c_ids[x], self.c_ids[y]),
                    cost: self.cfg.edge_insert_cost,
                });
            }
        }
        ops
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Attr, NodeKind, PointKind, Range};

    fn line(len: AttributeValue<f64>) -> NodeRecord<f64> {
        NodeRecord { id: NodeId(0), kind: NodeKind::Line, attrs: BTreeMap::from([(Attr::Length, len)]) }
    }

    fn range(min: f64, max: f64) -> AttributeValue<f64> {
        AttributeValue::Range(Range { min, max, center: (min + max) / 2.0, count: 2 })
    }

    #[test]
    fn in_range_is_free() {
        let cfg = CostConfig::default();
        assert_eq!(node_subst_cost(&line(AttributeValue::Scalar(5.0)), &line(range(3.0, 7.0)), &cfg), 0.0);
    }

    #[test]
    fn out_of_range_costs_boundary_distance() {
        let cfg = CostConfig::default();
        assert_eq!(node_subst_cost(&line(AttributeValue::Scalar(9.0)), &line(range(3.0, 7.0)), &cfg), 2.0);
        assert_eq!(node_subst_cost(&line(AttributeValue::Scalar(1.0)), &line(range(3.0, 7.0)), &cfg), 2.0);
    }

    #[test]
    fn line_versus_point_is_infinite() {
        let cfg = CostConfig::<f64>::default();
        let p = NodeRecord { id: NodeId(1), kind: NodeKind::Point(PointKind::CornerPoint), attrs: BTreeMap::new() };
        assert_eq!(node_subst_cost(&line(AttributeValue::Scalar(1.0)), &p, &cfg), cfg.infinity);
        assert_eq!(node_subst_cost(&p, &line(AttributeValue::Scalar(1.0)), &cfg), cfg.infinity);
    }

    #[test]
    fn label_mismatch_and_one_sided_attributes() {
        let cfg = CostConfig::<f64>::default();
        let mut a = line(AttributeValue::Scalar(1.0));
        let mut b = line(range(0.0, 2.0));
        a.attrs.insert(Attr::Quadrant, AttributeValue::category("1"));
        b.attrs.insert(Attr::Quadrant, AttributeValue::category("2"));
        assert_eq!(node_subst_cost(&a, &b, &cfg), cfg.infinity);
        b.attrs.remove(&Attr::Quadrant);
        assert_eq!(node_subst_cost(&a, &b, &cfg), 0.25);
    }

    #[test]
    fn config_checks() {
        assert!(CostConfig::<f64>::default().check().is_ok());
        let bad = CostConfig { edge_insert_cost: 2.0, ..CostConfig::<f64>::default() };
        assert!(bad.check().is_err());
    }
}
