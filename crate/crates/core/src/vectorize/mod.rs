//! Raster to contour graph.
//!
//! binarize -> skeletonize -> spur cleanup -> critical points -> segment
//! tracing -> corner detection -> graph building -> normalization.

mod bitmap;
mod build;
mod corners;
mod critical;
mod normalize;
mod thinning;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{validate, ContourGraph, ValidationReport};
use crate::Scalar;

pub use bitmap::{binarize, Bitmap, Pixel, Raster};
pub use build::build_graph;
pub(crate) use build::orient_lines;
pub use corners::{detect_corners, split_at_corners, Corner};
pub use critical::{
    extract_critical_points, prune_spurs, remove_small_components, trace_segments, CriticalKind, Polyline,
    RawCriticalPoint,
};
pub use normalize::{directions_of, normalize, quadrant_of, HorizontalDirection, VerticalDirection};
pub use thinning::skeletonize;

#[derive(Debug, Error, PartialEq)]
pub enum VectorizeError {
    #[error("image has no pixels")]
    EmptyImage,
    #[error("skeleton is empty")]
    EmptySkeleton,
    #[error("skeleton splits into {components} disconnected pieces")]
    DisconnectedGraph { components: usize },
    #[error("graph has zero spatial extent")]
    DegenerateBounds,
    #[error("direction vector is zero")]
    ZeroVector,
    #[error("vectorization produced an invalid graph: {0}")]
    InvalidGraph(ValidationReport),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VectorizeConfig<F> {
    /// Fraction of the maximum intensity a pixel must reach to be "on".
    pub threshold: F,
    /// Turning angle, degrees, above which a stroke point becomes a corner.
    pub corner_angle_deg: F,
    /// Arm length in pixels on each side of a corner candidate.
    pub corner_window: usize,
    /// Endpoint branches shorter than this (pixels) are removed as thinning spurs.
    pub min_spur_length: usize,
    /// Skeleton components with fewer pixels are discarded as specks.
    pub min_component_pixels: usize,
    /// Lower bound on the per-axis normalization divisor, as a fraction of
    /// the larger half-extent. Keeps thin glyphs from being stretched.
    pub min_aspect: F,
    /// Integer upsampling factor applied to the raster before binarization.
    pub upscale: usize,
}

impl<F: Scalar> Default for VectorizeConfig<F> {
    fn default() -> Self {
        VectorizeConfig {
            threshold: F::lit(0.5),
            corner_angle_deg: F::lit(45.0),
            corner_window: 5,
            min_spur_length: 4,
            min_component_pixels: 5,
            min_aspect: F::lit(0.5),
            upscale: 2,
        }
    }
}

/// Runs the full pipeline on a grayscale raster.
pub fn vectorize<F: Scalar>(image: &Raster, cfg: &VectorizeConfig<F>) -> Result<ContourGraph<F>, VectorizeError> {
    let image = if cfg.upscale > 1 { image.upscaled(cfg.upscale) } else { image.clone() };
    let bits = binarize(&image, cfg.threshold)?;
    let mut skel = skeletonize(&bits);
    skel = remove_small_components(&skel, cfg.min_component_pixels);
    skel = skeletonize(&prune_spurs(&skel, cfg.min_spur_length));
    if skel.count_on() == 0 {
        return Err(VectorizeError::EmptySkeleton);
    }
    let criticals = extract_critical_points(&skel);
    let (segments, criticals) = trace_segments(&skel, &criticals);
    let (segments, criticals) =
        split_at_corners(&segments, &criticals, cfg.corner_angle_deg.as_f64(), cfg.corner_window);
    let graph = build_graph::<F>(&segments, &criticals)?;
    let graph = normalize(&graph, cfg.min_aspect)?;
    let report = validate(&graph);
    if !report.is_ok() {
        return Err(VectorizeError::InvalidGraph(report));
    }
    Ok(graph)
}
