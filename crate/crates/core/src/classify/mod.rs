//! Winner-takes-all classification against a concept library.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::concept::{ConceptGraph, ConceptLibrary};
use crate::ged::{ged_search, Budget, CostConfig, EditOp, GedResult};
use crate::graph::{Attr, ContourGraph, NodeId, PointKind};
use crate::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("concept library is empty")]
    EmptyLibrary,
}

/// Structural summary of a concept. Point counts are by kind, so the
/// StartPoint is not included in any of them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub nodes: usize,
    pub edges: usize,
    pub endpoints: usize,
    pub corner_points: usize,
    pub intersection_points: usize,
    pub has_cycle: bool,
}

impl Signature {
    pub fn of<F: Scalar>(g: &ContourGraph<F>) -> Self {
        Signature {
            nodes: g.node_count(),
            edges: g.edge_count(),
            endpoints: g.count_kind(PointKind::EndPoint),
            corner_points: g.count_kind(PointKind::CornerPoint),
            intersection_points: g.count_kind(PointKind::IntersectionPoint),
            has_cycle: g.contour_type() == "CLOSED",
        }
    }

    pub fn complexity(&self) -> usize {
        self.nodes + self.edges
    }
}

/// A zero-cost substitution: the test node fell inside every range of the
/// concept node.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evidence {
    pub test: NodeId,
    pub concept: NodeId,
    pub attributes: Vec<&'static str>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostContributor<F> {
    pub operation: EditOp<F>,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Explanation<F> {
    pub signature: Signature,
    pub supporting: Vec<Evidence>,
    /// The three most expensive edits, costliest first.
    pub against: Vec<CostContributor<F>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport<F> {
    pub winner_label: String,
    pub winner_class: String,
    pub distances: BTreeMap<String, GedResult<F>>,
    pub tie_break_applied: bool,
    /// Labels that shared the minimum distance, in library order.
    pub tied_labels: Vec<String>,
    pub complexities: BTreeMap<String, usize>,
    pub explanation: Explanation<F>,
}

impl<F: Scalar> ClassificationReport<F> {
    pub fn winner_distance(&self) -> F {
        self.distances[&self.winner_label].distance
    }
}

fn same_distance<F: Scalar>(a: F, b: F) -> bool {
    (a - b).abs() <= F::lit(1e-9) * F::one().max(a.abs())
}

/// Picks the winner among `(label, distance, complexity)` candidates:
/// smallest distance, then largest complexity, then smallest label.
/// Returns the winner index, the tied indices and whether the complexity
/// rule was needed.
pub fn select_winner<F: Scalar>(candidates: &[(String, F, usize)]) -> Option<(usize, Vec<usize>, bool)> {
    let min = candidates.iter().map(|c| c.1).fold(None, |m: Option<F>, d| Some(m.map_or(d, |m| m.min(d))))?;
    let tied: Vec<usize> = (0..candidates.len()).filter(|&i| same_distance(candidates[i].1, min)).collect();
    let winner = *tied
        .iter()
        .min_by(|&&a, &&b| candidates[b].2.cmp(&candidates[a].2).then_with(|| candidates[a].0.cmp(&candidates[b].0)))
        .unwrap();
    Some((winner, tied.clone(), tied.len() > 1))
}

fn describe<F: Scalar>(op: &EditOp<F>, g: &ContourGraph<F>, c: &ContourGraph<F>) -> String {
    let kind = |gr: &ContourGraph<F>, id: NodeId| gr.kind(id).map_or("?".to_string(), |k| match k.point_kind() {
        Some(p) => p.name().to_string(),
        None => "Line".to_string(),
    });
    match op {
        EditOp::SubstituteNode { test, concept, cost } => {
            let (u, v) = (g.node(*test).unwrap(), c.node(*concept).unwrap());
            let mut out_of_range = Vec::new();
            for (attr, range) in v.attrs.iter().filter_map(|(a, val)| val.as_range().map(|r| (a, r))) {
                if let Some(x) = u.numeric(*attr) {
                    if !range.contains(x) {
                        out_of_range.push(format!(
                            "{} {:.3} outside [{:.3}, {:.3}]",
                            attr.name(),
                            x.as_f64(),
                            range.min.as_f64(),
                            range.max.as_f64()
                        ));
                    }
                }
            }
            let detail = if out_of_range.is_empty() { "attribute mismatch".to_string() } else { out_of_range.join(", ") };
            format!(
                "{} {} matched to {} {} ({detail}), cost {:.3}",
                kind(g, *test),
                test.0,
                kind(c, *concept),
                concept.0,
                cost.as_f64()
            )
        }
        EditOp::DeleteNode { test, cost } => format!("extra {} {}, cost {:.3}", kind(g, *test), test.0, cost.as_f64()),
        EditOp::InsertNode { concept, cost } => {
            format!("missing {} {}, cost {:.3}", kind(c, *concept), concept.0, cost.as_f64())
        }
        EditOp::DeleteEdge { test, cost } => format!("extra edge {}-{}, cost {:.3}", test.0 .0, test.1 .0, cost.as_f64()),
        EditOp::InsertEdge { concept, cost } => {
            format!("missing edge {}-{}, cost {:.3}", concept.0 .0, concept.1 .0, cost.as_f64())
        }
    }
}

fn build_explanation<F: Scalar>(g: &ContourGraph<F>, concept: &ConceptGraph<F>, result: &GedResult<F>) -> Explanation<F> {
    let c = &concept.graph;
    let supporting = result
        .edit_path
        .iter()
        .filter_map(|op| match op {
            EditOp::SubstituteNode { test, concept, cost } if *cost == F::zero() => {
                let attrs: Vec<&'static str> = c.node(*concept).unwrap().attrs.keys().map(|a: &Attr| a.name()).collect();
                Some(Evidence { test: *test, concept: *concept, attributes: attrs })
            }
            _ => None,
        })
        .collect();
    let mut costly: Vec<(usize, &EditOp<F>)> =
        result.edit_path.iter().enumerate().filter(|(_, op)| op.cost() > F::zero()).collect();
    costly.sort_by(|a, b| b.1.cost().as_f64().total_cmp(&a.1.cost().as_f64()).then(a.0.cmp(&b.0)));
    let against = costly
        .into_iter()
        .take(3)
        .map(|(_, op)| CostContributor { operation: op.clone(), description: describe(op, g, c) })
        .collect();
    Explanation { signature: Signature::of(c), supporting, against }
}

/// Classifies `g` as the class of its nearest concept.
///
/// Each concept gets its own search budget. Equal distances go to the
/// structurally richer concept (nodes plus edges), then to the smaller label.
pub fn classify<F: Scalar>(
    g: &ContourGraph<F>,
    lib: &ConceptLibrary<F>,
    cfg: &CostConfig<F>,
    budget: Budget,
) -> Result<ClassificationReport<F>, ClassifyError> {
    if lib.is_empty() {
        return Err(ClassifyError::EmptyLibrary);
    }
    let results: Vec<GedResult<F>> =
        lib.concepts().par_iter().map(|c| ged_search(g, &c.graph, cfg, budget)).collect();
    let candidates: Vec<(String, F, usize)> = lib
        .concepts()
        .iter()
        .zip(&results)
        .map(|(c, r)| (c.label.clone(), r.distance, c.structural_complexity()))
        .collect();
    let (w, tied, tie_break_applied) = select_winner(&candidates).expect("library is not empty");
    let winner = &lib.concepts()[w];
    let explanation = build_explanation(g, winner, &results[w]);
    Ok(ClassificationReport {
        winner_label: winner.label.clone(),
        winner_class: lib.class_of(&winner.label).unwrap_or(&winner.label).to_string(),
        tie_break_applied,
        tied_labels: tied.iter().map(|&i| candidates[i].0.clone()).collect(),
        complexities: candidates.iter().map(|c| (c.0.clone(), c.2)).collect(),
        distances: candidates.iter().map(|c| c.0.clone()).zip(results).collect(),
        explanation,
    })
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

/// Human-readable account of a classification.
pub fn explain<F: Scalar>(report: &ClassificationReport<F>) -> String {
    let s = &report.explanation.signature;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "class {} via concept {} at distance {:.3}",
        report.winner_class,
        report.winner_label,
        report.winner_distance().as_f64()
    );
    let cycle = if s.has_cycle { " (cycle)" } else { "" };
    let _ = writeln!(
        out,
        "concept structure: {} nodes, {} edges; {}{cycle}, {}, {}",
        s.nodes,
        s.edges,
        plural(s.intersection_points, "IntersectionPoint"),
        plural(s.endpoints, "EndPoint"),
        plural(s.corner_points, "CornerPoint"),
    );
    if report.tie_break_applied {
        let tied: Vec<String> =
            report.tied_labels.iter().map(|l| format!("{l} (complexity {})", report.complexities[l])).collect();
        let _ = writeln!(
            out,
            "tie between {}: the structurally more complex concept (nodes + edges) wins",
            tied.join(", ")
        );
    }
    if report.explanation.against.is_empty() {
        let _ = writeln!(out, "all attributes in range");
    } else {
        let _ = writeln!(out, "{} node(s) matched with all attributes in range", report.explanation.supporting.len());
        for c in &report.explanation.against {
            let _ = writeln!(out, "cost: {}", c.description);
        }
    }
    out
}
