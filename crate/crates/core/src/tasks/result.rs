use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::TaskConfig;
use crate::learn::FeatureDescriptor;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstancePrediction {
    /// State code, city name or region.
    pub instance: String,
    pub gold: String,
    pub predicted: String,
}

/// Training pool of one LOOCV fold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldAudit {
    pub held_out: String,
    pub training: Vec<String>,
}

/// Timestamps bounding one locale's chronological split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitAudit {
    pub locale: String,
    pub n_train: usize,
    pub n_test: usize,
    pub train_max: i64,
    pub test_min: i64,
}

/// Internal bookkeeping kept for protocol checks; not serialized.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TaskAudit {
    pub folds: Vec<FoldAudit>,
    pub splits: Vec<SplitAudit>,
}

impl TaskAudit {
    /// Every fold leaves out exactly its own instance and keeps the rest.
    pub fn loocv_ok(&self, instances: usize) -> bool {
        self.folds.len() == instances
            && self
                .folds
                .iter()
                .all(|f| f.training.len() == instances - 1 && !f.training.contains(&f.held_out))
    }

    /// All training tweets of a locale precede its test tweets.
    pub fn chronology_ok(&self) -> bool {
        self.splits.iter().all(|s| s.train_max <= s.test_min)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskResult {
    pub task: String,
    pub config: TaskConfig,
    pub accuracy: f64,
    pub baseline: f64,
    pub correct: usize,
    pub instances: usize,
    pub p_value: Option<f64>,
    pub per_instance: Vec<InstancePrediction>,
    pub top_features: BTreeMap<String, Vec<FeatureDescriptor>>,
    pub runtime_ms: u64,
    #[serde(skip)]
    pub audit: TaskAudit,
}
