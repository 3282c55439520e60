use std::collections::{BTreeSet, VecDeque};

use super::similarity::{agreement, categorical_profile, combine};
use super::{ReductionConfig, ReductionError};
use crate::graph::{Attr, ContourGraph, NodeId};
use crate::Scalar;

/// Upper bound on partial paths explored while enumerating.
const MAX_PARTIAL_PATHS: usize = 100_000;

/// Two paths joining an aligned pair of critical points, with the node
/// correspondence that scored best.
#[derive(Clone, Debug, PartialEq)]
pub struct PathPair<F> {
    pub path_a: Vec<NodeId>,
    pub path_b: Vec<NodeId>,
    /// Mean similarity over corresponded nodes.
    pub match_score: F,
    /// Index pairs `(i, j)`: `path_a[i]` corresponds to `path_b[j]`. Every
    /// node of the shorter path appears exactly once, in order.
    pub alignment: Vec<(usize, usize)>,
}

/// Result of pruning a path pair down to its shorter path.
#[derive(Clone, Debug, PartialEq)]
pub struct PruneOutcome {
    /// Whether `path_a` is the template (ties favor `a`).
    pub template_is_a: bool,
    /// Corresponded node pairs `(node of a, node of b)`.
    pub correspondence: Vec<(NodeId, NodeId)>,
    /// Nodes of the longer path without a partner.
    pub deleted: Vec<NodeId>,
}

/// Simple paths from `from` to `to`, fewest nodes first, at most `max`.
/// Interior nodes may not be in `blocked`.
pub fn simple_paths<F: Scalar>(
    g: &ContourGraph<F>,
    from: NodeId,
    to: NodeId,
    max: usize,
    blocked: &BTreeSet<NodeId>,
) -> Vec<Vec<NodeId>> {
    let mut found = Vec::new();
    if !g.contains(from) || !g.contains(to) || from == to || max == 0 {
        return found;
    }
    let mut queue = VecDeque::from([vec![from]]);
    let mut explored = 0;
    while let Some(path) = queue.pop_front() {
        explored += 1;
        if explored > MAX_PARTIAL_PATHS {
            break;
        }
        let last = *path.last().unwrap();
        for next in g.neighbors(last) {
            if next == to {
                let mut p = path.clone();
                p.push(to);
                found.push(p);
                if found.len() >= max {
                    return found;
                }
            } else if !path.contains(&next) && !blocked.contains(&next) {
                let mut p = path.clone();
                p.push(next);
                queue.push_back(p);
            }
        }
    }
    found
}

/// Position of each path node as a fraction of the path's arclength.
fn arclength_fractions<F: Scalar>(g: &ContourGraph<F>, path: &[NodeId]) -> Vec<F> {
    let lens: Vec<F> = path
        .iter()
        .map(|&id| g.node(id).filter(|n| n.kind.is_line()).and_then(|n| n.numeric(Attr::Length)).unwrap_or(F::zero()))
        .collect();
    let total: F = lens.iter().copied().sum();
    if !(total > F::zero()) {
        let denom = F::lit((path.len().max(2) - 1) as f64);
        return (0..path.len()).map(|i| F::lit(i as f64) / denom).collect();
    }
    let mut acc = F::zero();
    let half = F::lit(0.5);
    lens.iter()
        .map(|&l| {
            let f = (acc + l * half) / total;
            acc = acc + l;
            f
        })
        .collect()
}

/// Order-preserving alignment of the shorter path into the longer one.
///
/// Ends are pinned to ends, Points pair with Points and Lines with Lines.
/// Returns the mean similarity and the index pairs (short, long).
fn align<F: Scalar>(
    gs: &ContourGraph<F>,
    short: &[NodeId],
    gl: &ContourGraph<F>,
    long: &[NodeId],
    cfg: &ReductionConfig<F>,
) -> Option<(F, Vec<(usize, usize)>)> {
    let (m, n) = (short.len(), long.len());
    if m == 0 || m > n {
        return None;
    }
    let fs = arclength_fractions(gs, short);
    let fl = arclength_fractions(gl, long);
    let ps: Vec<_> = short.iter().map(|&id| categorical_profile(gs, id)).collect();
    let pl: Vec<_> = long.iter().map(|&id| categorical_profile(gl, id)).collect();
    let compatible = |i: usize, j: usize| gs.kind(short[i]).map(|k| k.is_line()) == gl.kind(long[j]).map(|k| k.is_line());
    let sim = |i: usize, j: usize| combine(F::one() - (fs[i] - fl[j]).abs(), agreement(&ps[i], &pl[j]), cfg);

    // best[i][j]: best total with short[i] matched to long[j]
    let neg = F::neg_infinity();
    let mut best = vec![vec![neg; n]; m];
    let mut back = vec![vec![usize::MAX; n]; m];
    if compatible(0, 0) {
        best[0][0] = sim(0, 0);
    }
    for i in 1..m {
        // leave room for the rest of the short path
        for j in i..=(n - m + i) {
            if !compatible(i, j) || (i == m - 1 && j != n - 1) {
                continue;
            }
            let mut arg = usize::MAX;
            let mut top = neg;
            for k in (i - 1)..j {
                if best[i - 1][k] > top {
                    top = best[i - 1][k];
                    arg = k;
                }
            }
            if arg != usize::MAX {
                best[i][j] = top + sim(i, j);
                back[i][j] = arg;
            }
        }
    }
    let total = best[m - 1][n - 1];
    if total == neg || (m == 1 && n != 1) {
        return None;
    }
    let mut pairs = vec![(m - 1, n - 1)];
    let mut j = n - 1;
    for i in (1..m).rev() {
        j = back[i][j];
        pairs.push((i - 1, j));
    }
    pairs.reverse();
    Some((total / F::lit(m as f64), pairs))
}

/// Picks, among all simple paths joining `a_ends` in `ga` and `b_ends` in
/// `gb`, the pair whose alignment has the highest mean node similarity.
/// Ties keep the earliest (shortest) candidate.
pub fn best_path_pair<F: Scalar>(
    ga: &ContourGraph<F>,
    a_ends: (NodeId, NodeId),
    a_blocked: &BTreeSet<NodeId>,
    gb: &ContourGraph<F>,
    b_ends: (NodeId, NodeId),
    b_blocked: &BTreeSet<NodeId>,
    cfg: &ReductionConfig<F>,
) -> Result<PathPair<F>, ReductionError> {
    let paths_a = simple_paths(ga, a_ends.0, a_ends.1, cfg.max_simple_paths, a_blocked);
    if paths_a.is_empty() {
        return Err(ReductionError::NoPathFound(a_ends.0, a_ends.1));
    }
    let paths_b = simple_paths(gb, b_ends.0, b_ends.1, cfg.max_simple_paths, b_blocked);
    if paths_b.is_empty() {
        return Err(ReductionError::NoPathFound(b_ends.0, b_ends.1));
    }
    let mut best: Option<PathPair<F>> = None;
    for pa in &paths_a {
        for pb in &paths_b {
            let scored = if pa.len() <= pb.len() {
                align(ga, pa, gb, pb, cfg)
            } else {
                align(gb, pb, ga, pa, cfg).map(|(s, pairs)| (s, pairs.into_iter().map(|(i, j)| (j, i)).collect()))
            };
            let Some((score, alignment)) = scored else { continue };
            if best.as_ref().is_none_or(|b| score > b.match_score) {
                best = Some(PathPair { path_a: pa.clone(), path_b: pb.clone(), match_score: score, alignment });
            }
        }
    }
    best.ok_or(ReductionError::NoPathFound(a_ends.0, a_ends.1))
}

/// Keeps the shorter path of the pair as the template: every template node
/// gets its partner and the longer path's other nodes are marked deleted.
pub fn prune_paths<F: Scalar>(pair: &PathPair<F>) -> PruneOutcome {
    let template_is_a = pair.path_a.len() <= pair.path_b.len();
    let correspondence: Vec<(NodeId, NodeId)> =
        pair.alignment.iter().map(|&(i, j)| (pair.path_a[i], pair.path_b[j])).collect();
    let (longer, matched): (&[NodeId], BTreeSet<NodeId>) = if template_is_a {
        (&pair.path_b, correspondence.iter().map(|c| c.1).collect())
    } else {
        (&pair.path_a, correspondence.iter().map(|c| c.0).collect())
    };
    let deleted = longer.iter().copied().filter(|id| !matched.contains(id)).collect();
    PruneOutcome { template_is_a, correspondence, deleted }
}

/// Rewrites `longer` inside `g` so only its corresponded nodes remain,
/// chained in path order. Returns `None` without touching anything when a
/// node to delete has connections off the path.
pub fn apply_prune<F: Scalar>(g: &ContourGraph<F>, longer: &[NodeId], deleted: &[NodeId]) -> Option<ContourGraph<F>> {
    if deleted.is_empty() {
        return Some(g.clone());
    }
    if deleted.iter().any(|&d| g.degree(d) > 2) {
        return None;
    }
    let mut out = g.clone();
    for w in longer.windows(2) {
        out.remove_edge(w[0], w[1]);
    }
    for &d in deleted {
        out.remove_node(d);
    }
    let kept: Vec<NodeId> = longer.iter().copied().filter(|id| !deleted.contains(id)).collect();
    for w in kept.windows(2) {
        out.add_edge(w[0], w[1]);
    }
    Some(out)
}
