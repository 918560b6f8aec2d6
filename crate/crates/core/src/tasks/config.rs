use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learn::SvmParams;
use crate::text::VocabMode;
use crate::topics::{LdaParams, DEFAULT_FOLD_IN_ITERATIONS};

/// Feature and evaluation settings shared by all tasks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TaskConfig {
    pub feature_mode: VocabMode,
    pub use_lda: bool,
    pub lda: LdaParams,
    pub fold_in_iterations: usize,
    pub svm: SvmParams,
    /// Chronological prefix of each locale's training side.
    pub train_fraction: f64,
    /// Chronological prefix of each locale's test side.
    pub test_fraction: f64,
    pub seed: u64,
    pub bootstrap_iterations: usize,
    /// Features listed per class in results.
    pub top_k: usize,
}

impl Default for TaskConfig {
    fn default() -> Self {
        TaskConfig {
            feature_mode: VocabMode::AllWords,
            use_lda: false,
            lda: LdaParams::default(),
            fold_in_iterations: DEFAULT_FOLD_IN_ITERATIONS,
            svm: SvmParams::default(),
            train_fraction: 1.0,
            test_fraction: 1.0,
            seed: 42,
            bootstrap_iterations: 10_000,
            top_k: 20,
        }
    }
}

impl TaskConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, f) in [("train", self.train_fraction), ("test", self.test_fraction)] {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::invalid(format!("{name} fraction {f} outside (0, 1]")));
            }
        }
        if self.bootstrap_iterations == 0 {
            return Err(Error::invalid("bootstrap iterations must be positive"));
        }
        Ok(())
    }
}
