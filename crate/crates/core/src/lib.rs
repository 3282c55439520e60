//! Few-shot classification of contour images with concept-attractor graphs.
//!
//! The pipeline:
//!
//! ```text
//! raster -> vectorize -> ContourGraph --(train: CRO merges)--> ConceptGraph
//! raster -> vectorize -> ContourGraph --(anytime GED vs library, WTA)--> ClassificationReport
//! ```
//!
//! Geometry, attributes and costs are generic over [`Scalar`] (`f32` or `f64`).
//! The aliases at the crate root fix the scalar to `f64`, which is what the
//! harness and the command-line tool use.

pub mod classify;
pub mod concept;
pub mod ged;
pub mod graph;
pub mod harness;
pub mod reduction;
mod scalar;
pub mod vectorize;

pub use scalar::Scalar;

pub use graph::{Attr, MetaKey, NodeId, NodeKind, PointKind};

pub type AttributeValue = graph::AttributeValue<f64>;
pub type Range = graph::Range<f64>;
pub type NodeRecord = graph::NodeRecord<f64>;
pub type ContourGraph = graph::ContourGraph<f64>;
pub type ConceptGraph = concept::ConceptGraph<f64>;
pub type ConceptLibrary = concept::ConceptLibrary<f64>;
pub type CostConfig = ged::CostConfig<f64>;
pub type GedResult = ged::GedResult<f64>;
pub type ClassificationReport = classify::ClassificationReport<f64>;
pub type ReductionConfig = reduction::ReductionConfig<f64>;
pub type VectorizeConfig = vectorize::VectorizeConfig<f64>;

pub type ContourGraphF32 = graph::ContourGraph<f32>;
pub type ConceptGraphF32 = concept::ConceptGraph<f32>;
pub type CostConfigF32 = ged::CostConfig<f32>;
