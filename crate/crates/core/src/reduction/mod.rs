//! Graph reduction operators.
//!
//! * parametric generalization: [`merge_numeric`], [`merge_categorical`],
//!   [`merge_tags`] and the node-level [`merge_attrs`];
//! * structural noise removal: [`endpoint_similarity`],
//!   [`remove_endpoint_branch`], [`merge_intersections`];
//! * path pruning: [`simple_paths`], [`best_path_pair`], [`prune_paths`].
//!
//! Every operator takes its input by reference and returns a new value.

mod merge;
mod paths;
mod similarity;
mod structural;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::NodeId;
use crate::Scalar;

pub use merge::{merge_attrs, merge_categorical, merge_numeric, merge_tags, merge_values};
pub use paths::{apply_prune, best_path_pair, prune_paths, simple_paths, PathPair, PruneOutcome};
pub use similarity::{endpoint_similarity, node_similarity, SimilarityMatrix};
pub use structural::{merge_intersections, remove_endpoint_branch};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("node {0:?} is not an EndPoint")]
    NotAnEndpoint(NodeId),
    #[error("no path between {0:?} and {1:?}")]
    NoPathFound(NodeId, NodeId),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReductionConfig<F> {
    /// Endpoints whose best match scores below this are removed.
    pub endpoint_sim_threshold: F,
    /// Weight of the position term in node similarity.
    pub w_pos: F,
    /// Weight of the categorical-agreement term in node similarity.
    pub w_attr: F,
    /// IntersectionPoints closer than this (normalized units) are merged.
    pub ip_merge_dist: F,
    /// Cap on simple paths enumerated per endpoint pair.
    pub max_simple_paths: usize,
}

impl<F: Scalar> Default for ReductionConfig<F> {
    fn default() -> Self {
        ReductionConfig {
            endpoint_sim_threshold: F::lit(0.5),
            w_pos: F::lit(0.7),
            w_attr: F::lit(0.3),
            ip_merge_dist: F::lit(0.15),
            max_simple_paths: 64,
        }
    }
}
