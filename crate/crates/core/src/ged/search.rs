use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use super::cost::Problem;
use super::{lsap, Budget, CostConfig, GedResult};
use crate::graph::{canonical_traversal, ContourGraph, NodeId};
use crate::Scalar;

/// Cost standing in for "impossible" inside the assignment matrix.
const FORBIDDEN: f64 = 1e15;

struct State {
    /// Lower bound on any completion.
    f: f64,
    /// Exact cost of the decided part.
    g: f64,
    mapping: Vec<Option<usize>>,
    used: Vec<bool>,
    /// Concept edges whose both ends are already used.
    closed_c_edges: usize,
}

impl PartialEq for State {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for State {}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for State {
    /// Reversed so the max-heap pops the smallest bound, then the
    /// lexicographically smallest prefix (deletion sorts last).
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |m: &[Option<usize>]| m.iter().map(|x| x.unwrap_or(usize::MAX)).collect::<Vec<_>>();
        other.f.total_cmp(&self.f).then_with(|| key(&other.mapping).cmp(&key(&self.mapping)))
    }
}

struct Search<'p, 'a, F> {
    p: &'p Problem<'a, F>,
    /// `remaining_g_edges[k]`: test edges with an end at index >= k.
    remaining_g_edges: Vec<usize>,
    best_cost: f64,
    best: Vec<Option<usize>>,
}

impl<F: Scalar> Search<'_, '_, F> {
    /// Assignment lower bound for the undecided nodes plus an edge-count
    /// bound; also returns the assignment's completion of `prefix`.
    fn bound(&self, prefix: &[Option<usize>], used: &[bool], closed_c_edges: usize) -> (f64, Vec<Option<usize>>) {
        let p = self.p;
        let k = prefix.len();
        let rows: Vec<usize> = (k..p.g_ids.len()).collect();
        let cols: Vec<usize> = (0..p.c_ids.len()).filter(|&j| !used[j]).collect();
        let (r, u) = (rows.len(), cols.len());
        let n = r + u;
        let mut m = vec![vec![FORBIDDEN; n]; n];
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                if p.allowed(i, j) {
                    m[a][b] = p.subst[i][j];
                }
            }
            m[a][u + a] = p.del[i];
        }
        for (b, &j) in cols.iter().enumerate() {
            m[r + b][b] = p.ins[j];
            for a in 0..r {
                m[r + b][u + a] = 0.0;
            }
        }
        let assignment = lsap::solve(&m);
        let node_lb: f64 = assignment.iter().enumerate().map(|(a, &b)| m[a][b]).sum();
        let eg = self.remaining_g_edges.get(k).copied().unwrap_or(0) as f64;
        let ec = (p.c_edges.len() - closed_c_edges) as f64;
        let edge_lb = (eg - ec).max(0.0) * p.edge_del + (ec - eg).max(0.0) * p.edge_ins;

        let mut completion = prefix.to_vec();
        for (a, _) in rows.iter().enumerate() {
            let b = assignment[a];
            completion.push((b < u).then(|| cols[b]));
        }
        (node_lb + edge_lb, completion)
    }

    fn offer(&mut self, mapping: Vec<Option<usize>>) {
        let cost = self.p.evaluate(&mapping);
        if cost < self.best_cost {
            self.best_cost = cost;
            self.best = mapping;
        }
    }

    /// Child state after deciding test node `k = parent.mapping.len()`.
    fn child(&self, parent: &State, target: Option<usize>) -> State {
        let p = self.p;
        let k = parent.mapping.len();
        let mut g = parent.g + target.map_or(p.del[k], |j| p.subst[k][j]);
        for (i, &mi) in parent.mapping.iter().enumerate() {
            let g_edge = p.g_adj[k][i];
            let c_edge = matches!((target, mi), (Some(j), Some(ji)) if p.c_adj[j][ji]);
            if g_edge && !c_edge {
                g += p.edge_del;
            }
            if c_edge && !g_edge {
                g += p.edge_ins;
            }
        }
        let mut used = parent.used.clone();
        let mut closed = parent.closed_c_edges;
        if let Some(j) = target {
            used[j] = true;
            closed += (0..used.len()).filter(|&x| x != j && used[x] && p.c_adj[j][x]).count();
        }
        let mut mapping = parent.mapping.clone();
        mapping.push(target);
        State { f: g, g, mapping, used, closed_c_edges: closed }
    }
}

/// Anytime best-first search over node assignments of the test graph `g`
/// (in canonical traversal order) to the concept graph `c`.
///
/// Every expanded state contributes its assignment-based completion as a
/// candidate, so the result only improves with budget and is always an
/// upper bound on the true distance. `exact` is set when the bound proves
/// optimality before the budget runs out.
pub fn ged_search<F: Scalar>(
    g: &ContourGraph<F>,
    c: &ContourGraph<F>,
    cfg: &CostConfig<F>,
    budget: Budget,
) -> GedResult<F> {
    let start = Instant::now();
    let order: Vec<NodeId> = canonical_traversal(g).unwrap_or_else(|_| g.node_ids().collect());
    let p = Problem::new(g, order, c, cfg);
    let n = p.g_ids.len();
    let mut remaining_g_edges = vec![0; n + 1];
    for &(a, b) in &p.g_edges {
        for slot in remaining_g_edges.iter_mut().take(a.max(b) + 1) {
            *slot += 1;
        }
    }
    let mut s = Search { p: &p, remaining_g_edges, best_cost: f64::INFINITY, best: Vec::new() };

    let root = State { f: 0.0, g: 0.0, mapping: Vec::new(), used: vec![false; p.c_ids.len()], closed_c_edges: 0 };
    let (lb, completion) = s.bound(&[], &root.used, 0);
    s.offer(completion);
    let mut exact = false;
    let mut expansions = 0u64;
    if !budget.is_zero() {
        let eps = 1e-9 * s.best_cost.abs().max(1.0);
        let mut heap = BinaryHeap::new();
        heap.push(State { f: lb, ..root });
        loop {
            let Some(state) = heap.pop() else {
                exact = true;
                break;
            };
            if state.f >= s.best_cost - eps {
                exact = true;
                break;
            }
            if budget.max_expansions.is_some_and(|m| expansions >= m)
                || budget.time.is_some_and(|t| start.elapsed() >= t)
            {
                break;
            }
            expansions += 1;
            let k = state.mapping.len();
            let targets = (0..p.c_ids.len()).filter(|&j| !state.used[j] && p.allowed(k, j)).map(Some);
            for target in targets.chain(std::iter::once(None)) {
                let mut child = s.child(&state, target);
                if child.mapping.len() == n {
                    s.offer(child.mapping.clone());
                    continue;
                }
                let (h, completion) = s.bound(&child.mapping, &child.used, child.closed_c_edges);
                s.offer(completion);
                child.f = child.g + h;
                if child.f < s.best_cost - eps {
                    heap.push(child);
                }
            }
        }
    }
    let edit_path = p.edit_ops(&s.best);
    let distance = edit_path.iter().map(|op| op.cost()).fold(F::zero(), |a, b| a + b);
    GedResult { distance, edit_path, exact, elapsed: start.elapsed(), expansions }
}
