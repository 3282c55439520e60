use std::collections::BTreeMap;

use super::ReductionConfig;
use crate::graph::{Attr, AttributeValue, ContourGraph, NodeId, NodeKind, PointKind};
use crate::Scalar;

/// Largest distance between two points of the normalized square.
const MAX_DIST: f64 = 2.0 * std::f64::consts::SQRT_2;

/// Pairwise endpoint similarities: rows are the concept's EndPoints, columns
/// the sample's.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityMatrix<F> {
    pub rows: Vec<NodeId>,
    pub cols: Vec<NodeId>,
    pub values: Vec<Vec<F>>,
}

impl<F: Scalar> SimilarityMatrix<F> {
    pub fn get(&self, i: usize, j: usize) -> F {
        self.values[i][j]
    }

    /// Best score of each row, zero when there are no columns.
    pub fn row_best(&self) -> Vec<F> {
        self.values.iter().map(|r| r.iter().copied().fold(F::zero(), F::max)).collect()
    }

    pub fn col_best(&self) -> Vec<F> {
        (0..self.cols.len()).map(|j| self.values.iter().map(|r| r[j]).fold(F::zero(), F::max)).collect()
    }
}

/// Labels describing a node: its own categorical attributes, plus those of
/// the single line a degree-1 point hangs from.
pub(crate) fn categorical_profile<F: Scalar>(g: &ContourGraph<F>, id: NodeId) -> BTreeMap<Attr, String> {
    let mut out = BTreeMap::new();
    let Some(node) = g.node(id) else { return out };
    let mut collect = |attrs: &BTreeMap<Attr, AttributeValue<F>>| {
        for (&a, v) in attrs {
            if let Some(c) = v.as_category() {
                out.entry(a).or_insert_with(|| c.to_string());
            }
        }
    };
    collect(&node.attrs);
    if node.kind.is_point() && g.degree(id) == 1 {
        let line = g.neighbors(id).next().unwrap();
        collect(&g.node(line).unwrap().attrs);
    }
    out
}

/// Fraction of shared labels that agree; zero when nothing is shared.
pub(crate) fn agreement<F: Scalar>(a: &BTreeMap<Attr, String>, b: &BTreeMap<Attr, String>) -> F {
    let shared: Vec<bool> = a.iter().filter_map(|(k, v)| b.get(k).map(|w| v == w)).collect();
    if shared.is_empty() {
        return F::zero();
    }
    F::lit(shared.iter().filter(|&&x| x).count() as f64 / shared.len() as f64)
}

/// `w_pos * closeness + w_attr * agreement`, with closeness in `[0, 1]`.
pub(crate) fn combine<F: Scalar>(closeness: F, agreement: F, cfg: &ReductionConfig<F>) -> F {
    let c = closeness.max(F::zero()).min(F::one());
    cfg.w_pos * c + cfg.w_attr * agreement
}

/// Similarity of two nodes by normalized position and label agreement.
pub fn node_similarity<F: Scalar>(
    ga: &ContourGraph<F>,
    a: NodeId,
    gb: &ContourGraph<F>,
    b: NodeId,
    cfg: &ReductionConfig<F>,
) -> F {
    let pos = |g: &ContourGraph<F>, id| g.node(id).and_then(|n| n.position());
    let closeness = match (pos(ga, a), pos(gb, b)) {
        (Some((xa, ya)), Some((xb, yb))) => {
            let d = ((xa - xb).powi(2) + (ya - yb).powi(2)).sqrt();
            F::one() - d / F::lit(MAX_DIST)
        }
        _ => F::zero(),
    };
    combine(closeness, agreement(&categorical_profile(ga, a), &categorical_profile(gb, b)), cfg)
}

fn endpoints<F: Scalar>(g: &ContourGraph<F>) -> Vec<NodeId> {
    g.points().filter(|n| n.kind == NodeKind::Point(PointKind::EndPoint)).map(|n| n.id).collect()
}

pub fn endpoint_similarity<F: Scalar>(
    concept: &ContourGraph<F>,
    sample: &ContourGraph<F>,
    cfg: &ReductionConfig<F>,
) -> SimilarityMatrix<F> {
    let rows = endpoints(concept);
    let cols = endpoints(sample);
    let values =
        rows.iter().map(|&r| cols.iter().map(|&c| node_similarity(concept, r, sample, c, cfg)).collect()).collect();
    SimilarityMatrix { rows, cols, values }
}
