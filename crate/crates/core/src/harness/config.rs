use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::augment::AugmentConfig;
use super::HarnessError;
use crate::ged::{Budget, CostConfig};
use crate::reduction::ReductionConfig;
use crate::vectorize::VectorizeConfig;
use crate::Scalar;

/// One concept to train: its label, the class it votes for, and which
/// images seed it. Indices count images of `class` in file order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConceptSpec {
    pub label: String,
    pub class: String,
    pub samples: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    pub images: PathBuf,
    pub labels: PathBuf,
    /// The last `test_per_class` images of each class form the test slice.
    pub test_per_class: usize,
}

impl Default for DataConfig {
    fn default() -> Self {
        DataConfig {
            images: PathBuf::from("data/mnist5k-images-idx3-ubyte.gz"),
            labels: PathBuf::from("data/mnist5k-labels-idx1-ubyte.gz"),
            test_per_class: 100,
        }
    }
}

/// Everything a train/evaluate run depends on, read from TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
#[serde(bound(deserialize = "F: Scalar + Deserialize<'de>", serialize = "F: Scalar + Serialize"))]
pub struct HarnessConfig<F> {
    pub classes: Vec<String>,
    /// Wall-clock cap per comparison; 0 disables it.
    pub budget_ms: u64,
    /// Search expansions per comparison; 0 disables it. Unlike the time
    /// limit, this cap gives the same answer on every machine.
    pub max_expansions: u64,
    pub data: DataConfig,
    pub augmentation: AugmentConfig,
    pub vectorize: VectorizeConfig<F>,
    pub reduction: ReductionConfig<F>,
    pub ged: CostConfig<F>,
    pub concepts: Vec<ConceptSpec>,
}

impl<F: Scalar> Default for HarnessConfig<F> {
    fn default() -> Self {
        HarnessConfig {
            classes: Vec::new(),
            budget_ms: 2000,
            max_expansions: 0,
            data: DataConfig::default(),
            augmentation: AugmentConfig::default(),
            vectorize: VectorizeConfig::default(),
            reduction: ReductionConfig::default(),
            ged: CostConfig::default(),
            concepts: Vec::new(),
        }
    }
}

impl<F: Scalar + for<'de> Deserialize<'de>> HarnessConfig<F> {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let cfg: Self = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}

impl<F: Scalar> HarnessConfig<F> {
    pub fn budget(&self) -> Budget {
        Budget {
            time: (self.budget_ms > 0).then(|| std::time::Duration::from_millis(self.budget_ms)),
            max_expansions: (self.max_expansions > 0).then_some(self.max_expansions),
        }
    }

    fn check(&self) -> Result<(), HarnessError> {
        self.ged.check().map_err(HarnessError::Config)?;
        let mut labels: Vec<&str> = self.concepts.iter().map(|c| c.label.as_str()).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(HarnessError::Config("duplicate concept label".into()));
        }
        for c in &self.concepts {
            if !self.classes.contains(&c.class) {
                return Err(HarnessError::Config(format!("concept {} names unknown class {}", c.label, c.class)));
            }
            if c.samples.is_empty() {
                return Err(HarnessError::Config(format!("concept {} has no samples", c.label)));
            }
        }
        if self.augmentation.scale_min <= 0.0 || self.augmentation.scale_min > self.augmentation.scale_max {
            return Err(HarnessError::Config("augmentation scale range is empty or non-positive".into()));
        }
        Ok(())
    }
}
