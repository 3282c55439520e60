//! Graph edit distance between a test graph and a concept, with range-aware
//! substitution costs and an anytime best-first search.

mod cost;
mod exact;
mod lsap;
mod search;

use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::NodeId;
use crate::Scalar;

pub use cost::node_subst_cost;
pub use exact::{exact_ged, EXACT_NODE_LIMIT};
pub use search::ged_search;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GedError {
    #[error("exact search limited to {limit} nodes in total, got {nodes}")]
    TooLarge { nodes: usize, limit: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostConfig<F> {
    pub node_insert_cost: F,
    pub node_delete_cost: F,
    pub edge_insert_cost: F,
    pub edge_delete_cost: F,
    /// Weight per attribute name; attributes not listed use `default_attr_weight`.
    pub attr_weight: BTreeMap<String, F>,
    pub default_attr_weight: F,
    /// Multiplied by the attribute weight when only one side has the attribute.
    pub presence_penalty: F,
    /// Substituting Points of different kinds.
    pub point_kind_mismatch: F,
    /// Sentinel for forbidden substitutions.
    pub infinity: F,
}

impl<F: Scalar> Default for CostConfig<F> {
    fn default() -> Self {
        CostConfig {
            node_insert_cost: F::one(),
            node_delete_cost: F::one(),
            edge_insert_cost: F::lit(0.1),
            edge_delete_cost: F::lit(0.1),
            attr_weight: BTreeMap::from([("angle".to_string(), F::lit(0.5))]),
            default_attr_weight: F::one(),
            presence_penalty: F::lit(0.25),
            point_kind_mismatch: F::lit(0.5),
            infinity: F::lit(1e9),
        }
    }
}

impl<F: Scalar> CostConfig<F> {
    pub fn weight(&self, attr: &str) -> F {
        self.attr_weight.get(attr).copied().unwrap_or(self.default_attr_weight)
    }

    /// Every finite cost multiplied by `k`; the sentinel is kept.
    pub fn scaled(&self, k: F) -> Self {
        CostConfig {
            node_insert_cost: self.node_insert_cost * k,
            node_delete_cost: self.node_delete_cost * k,
            edge_insert_cost: self.edge_insert_cost * k,
            edge_delete_cost: self.edge_delete_cost * k,
            attr_weight: self.attr_weight.iter().map(|(a, &w)| (a.clone(), w * k)).collect(),
            default_attr_weight: self.default_attr_weight * k,
            presence_penalty: self.presence_penalty,
            point_kind_mismatch: self.point_kind_mismatch * k,
            infinity: self.infinity,
        }
    }

    /// Checks that costs are positive and that edges are cheaper than nodes.
    pub fn check(&self) -> Result<(), String> {
        let finite = [
            ("node_insert_cost", self.node_insert_cost),
            ("node_delete_cost", self.node_delete_cost),
            ("edge_insert_cost", self.edge_insert_cost),
            ("edge_delete_cost", self.edge_delete_cost),
            ("point_kind_mismatch", self.point_kind_mismatch),
            ("presence_penalty", self.presence_penalty),
            ("default_attr_weight", self.default_attr_weight),
        ];
        for (name, v) in finite.into_iter().chain(self.attr_weight.iter().map(|(a, &w)| (a.as_str(), w))) {
            if !(v > F::zero()) || !v.is_finite() || v >= self.infinity {
                return Err(format!("{name} must be positive, finite and below infinity"));
            }
        }
        if self.edge_insert_cost >= self.node_insert_cost || self.edge_delete_cost >= self.node_delete_cost {
            return Err("edge costs must be below node costs".into());
        }
        Ok(())
    }
}

/// Stopping rule for [`ged_search`]. The search ends at whichever limit it
/// reaches first; expansion limits make results independent of machine speed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Budget {
    pub time: Option<Duration>,
    pub max_expansions: Option<u64>,
}

impl Budget {
    pub fn time(d: Duration) -> Self {
        Budget { time: Some(d), max_expansions: None }
    }

    pub fn expansions(n: u64) -> Self {
        Budget { time: None, max_expansions: Some(n) }
    }

    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn with_expansions(self, n: u64) -> Self {
        Budget { max_expansions: Some(n), ..self }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.time == Some(Duration::ZERO) || self.max_expansions == Some(0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum EditOp<F> {
    SubstituteNode { test: NodeId, concept: NodeId, cost: F },
    DeleteNode { test: NodeId, cost: F },
    InsertNode { concept: NodeId, cost: F },
    DeleteEdge { test: (NodeId, NodeId), cost: F },
    InsertEdge { concept: (NodeId, NodeId), cost: F },
}

impl<F: Scalar> EditOp<F> {
    pub fn cost(&self) -> F {
        match *self {
            EditOp::SubstituteNode { cost, .. }
            | EditOp::DeleteNode { cost, .. }
            | EditOp::InsertNode { cost, .. }
            | EditOp::DeleteEdge { cost, .. }
            | EditOp::InsertEdge { cost, .. } => cost,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GedResult<F> {
    /// Sum of the edit path's costs, in path order.
    pub distance: F,
    pub edit_path: Vec<EditOp<F>>,
    /// True only when the search proved the distance optimal.
    pub exact: bool,
    #[serde(skip)]
    pub elapsed: Duration,
    pub expansions: u64,
}

#[cfg(test)]
mod tests;
