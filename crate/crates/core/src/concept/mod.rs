//! Concept attractors: a class concept starts as its first sample and
//! absorbs every later sample through a five-stage merge.

mod cro;
mod library;

use thiserror::Error;

use crate::graph::{validate, AttributeValue, ContourGraph, GraphError, MetaKey, ValidationReport};
use crate::reduction::ReductionConfig;
use crate::Scalar;

pub use cro::{align_start_points, merge_sample, preprocess, synchronize, CriticalPair};
pub use library::{ConceptLibrary, LIBRARY_FORMAT_VERSION};

#[derive(Debug, Error)]
pub enum ConceptError {
    #[error("invalid graph: {0}")]
    InvalidGraph(ValidationReport),
    #[error("no StartPoint candidate reaches the similarity threshold (best {best:.3})")]
    AlignmentFailure { best: f64 },
    #[error("merge left no common structure")]
    NoCommonStructure,
    #[error("no samples to train on")]
    NoSamples,
    #[error("sample {index}: {source}")]
    Sample {
        index: usize,
        #[source]
        source: Box<ConceptError>,
    },
    #[error("duplicate concept label {0:?}")]
    DuplicateLabel(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("malformed library: {0}")]
    MalformedLibrary(String),
}

/// A generalized class prototype. Numeric attributes are ranges covering
/// the absorbed samples.
#[derive(Clone, Debug, PartialEq)]
pub struct ConceptGraph<F> {
    pub graph: ContourGraph<F>,
    pub label: String,
    pub samples_absorbed: u32,
}

impl<F: Scalar> ConceptGraph<F> {
    pub fn structural_complexity(&self) -> usize {
        self.graph.structural_complexity()
    }
}

fn lift_all<F: Scalar>(g: &mut ContourGraph<F>) {
    for node in g.nodes_mut() {
        for v in node.attrs.values_mut() {
            *v = v.lifted();
        }
    }
    for v in g.metadata.values_mut() {
        *v = v.lifted();
    }
}

/// Sample tallies and contour type as metadata values.
pub(crate) fn sample_metadata<F: Scalar>(g: &ContourGraph<F>) -> Vec<(MetaKey, AttributeValue<F>)> {
    let (ep, cp, ip) = g.critical_tallies();
    let stored = |k: MetaKey, fallback: usize| {
        g.metadata.get(&k).cloned().unwrap_or(AttributeValue::Scalar(F::lit(fallback as f64)))
    };
    vec![
        (MetaKey::EndpointCounts, stored(MetaKey::EndpointCounts, ep)),
        (MetaKey::CornerPointCounts, stored(MetaKey::CornerPointCounts, cp)),
        (MetaKey::IntersectionPointCounts, stored(MetaKey::IntersectionPointCounts, ip)),
        (
            MetaKey::ContourType,
            g.metadata.get(&MetaKey::ContourType).cloned().unwrap_or(AttributeValue::category(g.contour_type())),
        ),
    ]
}

/// Starts a concept from one sample, lifting every number to a degenerate range.
pub fn init_concept<F: Scalar>(g: &ContourGraph<F>, label: &str) -> Result<ConceptGraph<F>, ConceptError> {
    let report = validate(g);
    if !report.is_ok() {
        return Err(ConceptError::InvalidGraph(report));
    }
    let mut graph = g.clone();
    for (k, v) in sample_metadata(g) {
        graph.metadata.insert(k, v);
    }
    lift_all(&mut graph);
    Ok(ConceptGraph { graph, label: label.to_string(), samples_absorbed: 1 })
}

/// Left fold of [`merge_sample`] over the samples after the first.
///
/// A sample that cannot be aligned is skipped with a warning; any other
/// error aborts training and names the sample.
pub fn train_concept<F: Scalar>(
    samples: &[ContourGraph<F>],
    label: &str,
    cfg: &ReductionConfig<F>,
) -> Result<ConceptGraph<F>, ConceptError> {
    let (first, rest) = samples.split_first().ok_or(ConceptError::NoSamples)?;
    let mut concept =
        init_concept(first, label).map_err(|e| ConceptError::Sample { index: 0, source: Box::new(e) })?;
    for (i, g) in rest.iter().enumerate() {
        match merge_sample(&concept, g, cfg) {
            Ok(next) => concept = next,
            Err(ConceptError::AlignmentFailure { best }) => {
                log::warn!("concept {label}: skipping sample {} (alignment score {best:.3})", i + 1);
            }
            Err(e) => return Err(ConceptError::Sample { index: i + 1, source: Box::new(e) }),
        }
    }
    Ok(concept)
}
