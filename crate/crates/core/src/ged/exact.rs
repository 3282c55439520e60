use std::time::Instant;

use super::cost::Problem;
use super::{CostConfig, GedError, GedResult};
use crate::graph::ContourGraph;
use crate::Scalar;

/// Largest combined node count [`exact_ged`] accepts.
pub const EXACT_NODE_LIMIT: usize = 12;

/// Exhaustive minimum over every injective partial node mapping. Meant as a
/// reference for small graphs.
pub fn exact_ged<F: Scalar>(
    g: &ContourGraph<F>,
    c: &ContourGraph<F>,
    cfg: &CostConfig<F>,
) -> Result<GedResult<F>, GedError> {
    let nodes = g.node_count() + c.node_count();
    if nodes > EXACT_NODE_LIMIT {
        return Err(GedError::TooLarge { nodes, limit: EXACT_NODE_LIMIT });
    }
    let start = Instant::now();
    let p = Problem::new(g, g.node_ids().collect(), c, cfg);
    let mut mapping = Vec::with_capacity(p.g_ids.len());
    let mut used = vec![false; p.c_ids.len()];
    let mut best: Option<(f64, Vec<Option<usize>>)> = None;
    let mut visited = 0u64;
    enumerate(&p, &mut mapping, &mut used, &mut best, &mut visited);
    let (_, mapping) = best.expect("the empty mapping always exists");
    let edit_path = p.edit_ops(&mapping);
    let distance = edit_path.iter().map(|op| op.cost()).fold(F::zero(), |a, b| a + b);
    Ok(GedResult { distance, edit_path, exact: true, elapsed: start.elapsed(), expansions: visited })
}

fn enumerate<F: Scalar>(
    p: &Problem<F>,
    mapping: &mut Vec<Option<usize>>,
    used: &mut [bool],
    best: &mut Option<(f64, Vec<Option<usize>>)>,
    visited: &mut u64,
) {
    if mapping.len() == p.g_ids.len() {
        *visited += 1;
        let cost = p.evaluate(mapping);
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            *best = Some((cost, mapping.clone()));
        }
        return;
    }
    mapping.push(None);
    enumerate(p, mapping, used, best, visited);
    mapping.pop();
    for j in 0..used.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        mapping.push(Some(j));
        enumerate(p, mapping, used, best, visited);
        mapping.pop();
        used[j] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{NodeKind, PointKind};

    #[test]
    fn empty_versus_empty() {
        let e = ContourGraph::<f64>::new();
        let r = exact_ged(&e, &e, &CostConfig::default()).unwrap();
        assert_eq!(r.distance, 0.0);
        assert!(r.edit_path.is_empty());
    }

    #[test]
    fn single_node_versus_empty() {
        let mut g = ContourGraph::<f64>::new();
        g.add_point(PointKind::StartPoint, 0.0, 0.0);
        let cfg = CostConfig::default();
        let r = exact_ged(&g, &ContourGraph::new(), &cfg).unwrap();
        assert_eq!(r.distance, cfg.node_delete_cost);
    }

    #[test]
    fn too_large() {
        let mut g = ContourGraph::<f64>::new();
        for _ in 0..13 {
            g.add_node(NodeKind::Line, Default::default());
        }
        let err = exact_ged(&g, &ContourGraph::new(), &CostConfig::default()).unwrap_err();
        assert_eq!(err, GedError::TooLarge { nodes: 13, limit: EXACT_NODE_LIMIT });
    }
}
