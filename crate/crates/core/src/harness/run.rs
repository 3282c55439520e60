use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use super::augment::augment;
use super::config::{ConceptSpec, HarnessConfig};
use super::metrics::{ClassMetrics, Confusion};
use super::{HarnessError, IdxDataset};
use crate::classify::{classify, explain, ClassificationReport};
use crate::concept::{train_concept, ConceptLibrary};
use crate::ged::Budget;
use crate::vectorize::{vectorize, Raster};
use crate::Scalar;

/// Which part of the data a slice was drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Split {
    TrainBase,
    Test,
}

/// Images with their true classes. `source` holds each image's index in
/// the dataset it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetSlice {
    pub images: Vec<Raster>,
    pub classes: Vec<String>,
    pub source: Vec<usize>,
    pub split: Split,
}

impl DatasetSlice {
    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Every `step`-th image, keeping at least one.
    pub fn every(&self, step: usize) -> DatasetSlice {
        let keep: Vec<usize> = (0..self.len()).step_by(step.max(1)).collect();
        DatasetSlice {
            images: keep.iter().map(|&i| self.images[i].clone()).collect(),
            classes: keep.iter().map(|&i| self.classes[i].clone()).collect(),
            source: keep.iter().map(|&i| self.source[i]).collect(),
            split: self.split,
        }
    }
}

fn class_positions(data: &IdxDataset, class: &str) -> Vec<usize> {
    (0..data.labels.len()).filter(|&i| data.labels[i].to_string() == class).collect()
}

/// The last `per_class` images of each class, grouped by class.
pub fn test_slice(data: &IdxDataset, classes: &[String], per_class: usize) -> DatasetSlice {
    let mut slice = DatasetSlice { images: vec![], classes: vec![], source: vec![], split: Split::Test };
    for class in classes {
        let pos = class_positions(data, class);
        for &i in &pos[pos.len().saturating_sub(per_class)..] {
            slice.images.push(data.images[i].clone());
            slice.classes.push(class.clone());
            slice.source.push(i);
        }
    }
    slice
}

/// The base samples of one concept. Indices that would reach into the
/// test slice are rejected so training and test stay disjoint.
pub fn concept_samples(data: &IdxDataset, spec: &ConceptSpec, test_per_class: usize) -> Result<DatasetSlice, HarnessError> {
    let pos = class_positions(data, &spec.class);
    let pool = pos.len().saturating_sub(test_per_class);
    let mut slice = DatasetSlice { images: vec![], classes: vec![], source: vec![], split: Split::TrainBase };
    for &k in &spec.samples {
        if k >= pool {
            return Err(HarnessError::SampleOutOfRange { label: spec.label.clone(), index: k, pool });
        }
        slice.images.push(data.images[pos[k]].clone());
        slice.classes.push(spec.class.clone());
        slice.source.push(pos[k]);
    }
    Ok(slice)
}

/// Counts from one concept's training run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrainingSummary {
    pub label: String,
    pub graphs: usize,
    pub vectorize_failures: usize,
    pub absorbed: u32,
    pub nodes: usize,
    pub edges: usize,
}

/// Vectorizes each base sample followed by its augmented variants, in
/// config order, and folds them into one concept per group.
pub fn train_library<F: Scalar>(
    groups: &[(ConceptSpec, DatasetSlice)],
    cfg: &HarnessConfig<F>,
) -> Result<(ConceptLibrary<F>, Vec<TrainingSummary>), HarnessError> {
    let aug = &cfg.augmentation;
    let trained: Vec<_> = groups
        .par_iter()
        .map(|(spec, slice)| {
            let mut rasters = Vec::new();
            for (img, &src) in slice.images.iter().zip(&slice.source) {
                rasters.push(img.clone());
                let seed = aug.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(src as u64);
                rasters.extend(augment(img, aug.count, seed, aug));
            }
            let mut graphs = Vec::new();
            let mut failures = 0;
            for (i, r) in rasters.iter().enumerate() {
                match vectorize(r, &cfg.vectorize) {
                    Ok(g) => graphs.push(g),
                    Err(e) => {
                        failures += 1;
                        log::warn!("concept {}: training image {i} failed to vectorize: {e}", spec.label);
                    }
                }
            }
            if graphs.is_empty() {
                return Err(HarnessError::GroupFailed { label: spec.label.clone(), reason: "no sample vectorized".into() });
            }
            let concept = train_concept(&graphs, &spec.label, &cfg.reduction)
                .map_err(|e| HarnessError::GroupFailed { label: spec.label.clone(), reason: e.to_string() })?;
            let summary = TrainingSummary {
                label: spec.label.clone(),
                graphs: graphs.len(),
                vectorize_failures: failures,
                absorbed: concept.samples_absorbed,
                nodes: concept.graph.node_count(),
                edges: concept.graph.edge_count(),
            };
            Ok((spec.class.clone(), concept, summary))
        })
        .collect();
    let mut lib = ConceptLibrary::new();
    let mut summaries = Vec::new();
    for item in trained {
        let (class, concept, summary) = item?;
        lib.push(concept, &class).map_err(|e| HarnessError::GroupFailed { label: summary.label.clone(), reason: e.to_string() })?;
        summaries.push(summary);
    }
    Ok((lib, summaries))
}

/// Loads the dataset named in the config and trains every concept.
pub fn train_from_config<F: Scalar>(
    data: &IdxDataset,
    cfg: &HarnessConfig<F>,
) -> Result<(ConceptLibrary<F>, Vec<TrainingSummary>), HarnessError> {
    let groups = cfg
        .concepts
        .iter()
        .map(|spec| Ok((spec.clone(), concept_samples(data, spec, cfg.data.test_per_class)?)))
        .collect::<Result<Vec<_>, HarnessError>>()?;
    train_library(&groups, cfg)
}

/// What happened to one test image.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome<F> {
    Classified { predicted: String, report: Box<ClassificationReport<F>> },
    Failed { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImageResult<F> {
    pub source: usize,
    pub truth: String,
    pub outcome: Outcome<F>,
}

/// Scores of a batch run. Timing is kept out of the serialized form so that
/// repeated runs produce identical JSON.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvaluationResult {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub per_class: BTreeMap<String, ClassMetrics>,
    pub confusion: Confusion,
    pub classified_count: usize,
    pub failed_count: usize,
    /// Test images whose search hit the budget against at least one concept.
    pub inexact_count: usize,
    #[serde(skip)]
    pub mean_inference_time: Duration,
}

impl EvaluationResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metrics serialize")
    }
}

/// Classifies every image of the slice. Vectorization failures are counted
/// and left out of the confusion matrix.
pub fn evaluate<F: Scalar>(
    lib: &ConceptLibrary<F>,
    slice: &DatasetSlice,
    cfg: &HarnessConfig<F>,
    budget: Budget,
) -> (EvaluationResult, Vec<ImageResult<F>>) {
    let timed: Vec<(ImageResult<F>, Option<Duration>)> = (0..slice.len())
        .into_par_iter()
        .map(|i| {
            let start = Instant::now();
            let outcome = match vectorize(&slice.images[i], &cfg.vectorize) {
                Err(e) => Outcome::Failed { reason: e.to_string() },
                Ok(g) => match classify(&g, lib, &cfg.ged, budget) {
                    Ok(report) => Outcome::Classified { predicted: report.winner_class.clone(), report: Box::new(report) },
                    Err(e) => Outcome::Failed { reason: e.to_string() },
                },
            };
            let elapsed = matches!(outcome, Outcome::Classified { .. }).then(|| start.elapsed());
            (ImageResult { source: slice.source[i], truth: slice.classes[i].clone(), outcome }, elapsed)
        })
        .collect();

    let classes = if cfg.classes.is_empty() {
        let mut c: Vec<String> = lib.class_map().values().cloned().collect();
        c.sort();
        c.dedup();
        c
    } else {
        cfg.classes.clone()
    };
    let mut confusion = Confusion::new(classes);
    let (mut failed, mut inexact) = (0, 0);
    let mut total_time = Duration::ZERO;
    for (r, t) in &timed {
        match &r.outcome {
            Outcome::Failed { .. } => failed += 1,
            Outcome::Classified { predicted, report } => {
                if !confusion.add(&r.truth, predicted) {
                    log::warn!("image {}: class {} or {} is outside the class list", r.source, r.truth, predicted);
                }
                if report.distances.values().any(|d| !d.exact) {
                    inexact += 1;
                }
            }
        }
        total_time += t.unwrap_or_default();
    }
    let classified = slice.len() - failed;
    let m = confusion.metrics();
    let result = EvaluationResult {
        accuracy: m.accuracy,
        precision: m.precision,
        recall: m.recall,
        f1: m.f1,
        per_class: m.per_class,
        confusion,
        classified_count: classified,
        failed_count: failed,
        inexact_count: inexact,
        mean_inference_time: if classified == 0 { Duration::ZERO } else { total_time / classified as u32 },
    };
    (result, timed.into_iter().map(|(r, _)| r).collect())
}

/// One JSON object per line: source index, truth, prediction and the
/// explanation text.
pub fn explanations_jsonl<F: Scalar>(results: &[ImageResult<F>]) -> String {
    let mut out = String::new();
    for r in results {
        let line = match &r.outcome {
            Outcome::Classified { predicted, report } => serde_json::json!({
                "source": r.source,
                "truth": r.truth,
                "predicted": predicted,
                "winner_label": report.winner_label,
                "distance": report.winner_distance().as_f64(),
                "explanation": explain(report),
            }),
            Outcome::Failed { reason } => serde_json::json!({
                "source": r.source,
                "truth": r.truth,
                "failed": reason,
            }),
        };
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

/// Writes `metrics.json`, `confusion.csv` and `timing.json` into `dir`.
pub fn write_outputs(dir: &Path, result: &EvaluationResult) -> Result<(), HarnessError> {
    let io = |e: std::io::Error| HarnessError::Io(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    std::fs::write(dir.join("metrics.json"), result.to_json()).map_err(io)?;
    std::fs::write(dir.join("confusion.csv"), result.confusion.to_csv()).map_err(io)?;
    let timing = serde_json::json!({ "mean_inference_ms": result.mean_inference_time.as_secs_f64() * 1000.0 });
    std::fs::write(dir.join("timing.json"), serde_json::to_string_pretty(&timing).unwrap()).map_err(io)?;
    Ok(())
}
