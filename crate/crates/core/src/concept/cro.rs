use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{sample_metadata, ConceptError, ConceptGraph};
use crate::graph::{canonical_traversal, validate, ContourGraph, NodeId, NodeKind, PointKind};
use crate::reduction::{
    apply_prune, best_path_pair, endpoint_similarity, merge_attrs, merge_intersections, merge_values,
    node_similarity, prune_paths, remove_endpoint_branch, ReductionConfig,
};
use crate::vectorize::orient_lines;
use crate::Scalar;

/// A concept critical point and the sample critical point it was paired with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CriticalPair {
    pub concept: NodeId,
    pub sample: NodeId,
}

/// Stage 1: promotes the sample point most similar to the concept's
/// StartPoint. When the concept starts at a stroke end, only stroke ends of
/// the sample compete. Line directions are re-derived from the new start.
pub fn align_start_points<F: Scalar>(
    concept: &ContourGraph<F>,
    sample: &ContourGraph<F>,
    cfg: &ReductionConfig<F>,
) -> Result<ContourGraph<F>, ConceptError> {
    let c_sp = concept.start_point().ok_or(ConceptError::Graph(crate::graph::GraphError::MissingStartPoint))?;
    let mut candidates: Vec<NodeId> = sample.points().map(|n| n.id).collect();
    if concept.degree(c_sp) == 1 {
        let ends: Vec<NodeId> = candidates.iter().copied().filter(|&id| sample.degree(id) == 1).collect();
        if !ends.is_empty() {
            candidates = ends;
        }
    }
    let mut best: Option<(F, NodeId)> = None;
    for id in candidates {
        let s = node_similarity(concept, c_sp, sample, id, cfg);
        if best.is_none_or(|(b, _)| s > b) {
            best = Some((s, id));
        }
    }
    let Some((score, anchor)) = best else {
        return Err(ConceptError::AlignmentFailure { best: 0.0 });
    };
    if score < cfg.endpoint_sim_threshold {
        return Err(ConceptError::AlignmentFailure { best: score.as_f64() });
    }
    let mut out = sample.clone();
    if out.start_point() != Some(anchor) {
        if let Some(old) = out.start_point() {
            out.set_point_kind(old, PointKind::from_degree(out.degree(old)));
        }
        out.set_point_kind(anchor, PointKind::StartPoint);
        orient_lines(&mut out, anchor);
    }
    Ok(out)
}

/// Stage 2: on both graphs, removes endpoint branches whose best match on
/// the other side scores below the threshold, then merges close junctions.
pub fn preprocess<F: Scalar>(
    concept: &ContourGraph<F>,
    sample: &ContourGraph<F>,
    cfg: &ReductionConfig<F>,
) -> (ContourGraph<F>, ContourGraph<F>) {
    let sim = endpoint_similarity(concept, sample, cfg);
    let weak = |ids: &[NodeId], best: Vec<F>| -> Vec<NodeId> {
        ids.iter().zip(best).filter(|(_, b)| *b < cfg.endpoint_sim_threshold).map(|(&id, _)| id).collect()
    };
    let drop = |g: &ContourGraph<F>, ids: Vec<NodeId>| {
        let mut out = g.clone();
        for id in ids {
            // an earlier removal may have collapsed this branch already
            if let Ok(next) = remove_endpoint_branch(&out, id) {
                out = next;
            }
        }
        merge_intersections(&out, cfg.ip_merge_dist)
    };
    let c = drop(concept, weak(&sim.rows, sim.row_best()));
    let g = drop(sample, weak(&sim.cols, sim.col_best()));
    (c, g)
}

fn critical_points<F: Scalar>(g: &ContourGraph<F>) -> Result<Vec<NodeId>, ConceptError> {
    Ok(canonical_traversal(g)?.into_iter().filter(|&id| g.kind(id).is_some_and(|k| k.is_point())).collect())
}

/// Stage 3: pairs critical points greedily in the concept's traversal order.
/// StartPoints always pair; every other concept point takes the most similar
/// unpaired sample point of the same kind if it clears the threshold.
pub fn synchronize<F: Scalar>(
    concept: &ContourGraph<F>,
    sample: &ContourGraph<F>,
    cfg: &ReductionConfig<F>,
) -> Result<Vec<CriticalPair>, ConceptError> {
    let c_points = critical_points(concept)?;
    let s_points = critical_points(sample)?;
    let mut used = BTreeSet::new();
    let mut pairs = Vec::new();
    for c in c_points {
        let kind = concept.kind(c);
        let mut best: Option<(F, NodeId)> = None;
        for &s in &s_points {
            if used.contains(&s) || sample.kind(s) != kind {
                continue;
            }
            let score = node_similarity(concept, c, sample, s, cfg);
            let forced = kind == Some(NodeKind::Point(PointKind::StartPoint));
            if (forced || score >= cfg.endpoint_sim_threshold) && best.is_none_or(|(b, _)| score > b) {
                best = Some((score, s));
            }
        }
        if let Some((_, s)) = best {
            used.insert(s);
            pairs.push(CriticalPair { concept: c, sample: s });
        }
    }
    Ok(pairs)
}

/// Paired points reachable from each paired point without crossing another.
fn adjacent_pairs<F: Scalar>(g: &ContourGraph<F>, points: &[NodeId]) -> BTreeSet<(usize, usize)> {
    let index: BTreeMap<NodeId, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut out = BTreeSet::new();
    for (i, &p) in points.iter().enumerate() {
        let mut seen = BTreeSet::from([p]);
        let mut queue = VecDeque::from([p]);
        while let Some(n) = queue.pop_front() {
            for m in g.neighbors(n) {
                if !seen.insert(m) {
                    continue;
                }
                match index.get(&m) {
                    Some(&j) => {
                        out.insert((i.min(j), i.max(j)));
                    }
                    None => queue.push_back(m),
                }
            }
        }
    }
    out
}

/// Stage 4: prunes the path segments between adjacent paired points so the
/// concept keeps only structure the sample shares. Returns the reduced
/// concept and the node correspondence concept -> sample.
fn common_structure<F: Scalar>(
    concept: &ContourGraph<F>,
    sample: &ContourGraph<F>,
    pairs: &[CriticalPair],
    cfg: &ReductionConfig<F>,
) -> (ContourGraph<F>, BTreeMap<NodeId, NodeId>) {
    let c_points: Vec<NodeId> = pairs.iter().map(|p| p.concept).collect();
    let s_points: Vec<NodeId> = pairs.iter().map(|p| p.sample).collect();
    let mut correspondence: BTreeMap<NodeId, NodeId> = pairs.iter().map(|p| (p.concept, p.sample)).collect();
    let shared: Vec<(usize, usize)> =
        adjacent_pairs(concept, &c_points).intersection(&adjacent_pairs(sample, &s_points)).copied().collect();
    let mut c = concept.clone();
    for (i, j) in shared {
        let blocked = |pts: &[NodeId]| -> BTreeSet<NodeId> {
            pts.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &p)| p).collect()
        };
        let Ok(pair) = best_path_pair(
            &c,
            (c_points[i], c_points[j]),
            &blocked(&c_points),
            sample,
            (s_points[i], s_points[j]),
            &blocked(&s_points),
            cfg,
        ) else {
            continue;
        };
        let outcome = prune_paths(&pair);
        if !outcome.template_is_a {
            if let Some(next) = apply_prune(&c, &pair.path_a, &outcome.deleted) {
                c = next;
            }
        }
        for (a, b) in outcome.correspondence {
            if c.contains(a) {
                correspondence.entry(a).or_insert(b);
            }
        }
    }
    correspondence.retain(|a, _| c.contains(*a));
    (c, correspondence)
}

/// One concept-refinement step: folds `sample` into `concept`.
///
/// Steps: align StartPoints; drop weak endpoint branches and merge close
/// junctions on both sides; pair critical points along the traversal;
/// prune the paths between pairs to the shorter one; merge the attributes
/// of corresponded nodes and the count metadata.
pub fn merge_sample<F: Scalar>(
    concept: &ConceptGraph<F>,
    sample: &ContourGraph<F>,
    cfg: &ReductionConfig<F>,
) -> Result<ConceptGraph<F>, ConceptError> {
    let report = validate(sample);
    if !report.is_ok() {
        return Err(ConceptError::InvalidGraph(report));
    }
    let aligned = align_start_points(&concept.graph, sample, cfg)?;
    let (c, g) = preprocess(&concept.graph, &aligned, cfg);
    let pairs = synchronize(&c, &g, cfg)?;
    let (mut c, correspondence) = common_structure(&c, &g, &pairs, cfg);
    if c.is_empty() {
        return Err(ConceptError::NoCommonStructure);
    }

    for (&a, &b) in &correspondence {
        let (Some(ka), Some(kb)) = (c.kind(a), g.kind(b)) else { continue };
        if ka.is_line() != kb.is_line() {
            continue;
        }
        let merged = merge_attrs(&c.node(a).unwrap().attrs, &g.node(b).unwrap().attrs);
        c.node_mut(a).unwrap().attrs = merged;
    }
    for (key, value) in sample_metadata(sample) {
        match c.metadata.get(&key).and_then(|cur| merge_values(cur, &value)) {
            Some(v) => {
                c.metadata.insert(key, v);
            }
            None => {
                c.metadata.remove(&key);
            }
        }
    }
    c.reclassify_by_degree();
    let report = validate(&c);
    if !report.is_ok() {
        return Err(ConceptError::InvalidGraph(report));
    }
    Ok(ConceptGraph { graph: c, label: concept.label.clone(), samples_absorbed: concept.samples_absorbed + 1 })
}
