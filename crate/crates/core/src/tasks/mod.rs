//! Experimental protocols: state-characteristic LOOCV, locale prediction
//! with chronological splits, learning curves and bootstrap significance,
//! plus a synthetic corpus generator with planted signal.

mod bootstrap;
mod config;
mod context;
mod curve;
mod labels;
mod locale;
mod result;
mod state_chars;
mod synth;

pub use bootstrap::bootstrap_significance;
pub use config::TaskConfig;
pub use context::FeatureContext;
pub use curve::{learning_curve, LearningCurve};
pub use labels::{LabelDataset, StateLabelSet};
pub use locale::{chronological_split, run_locale_task, LocaleLevel, CITY15, MIN_LOCALE_TWEETS, TRAIN_SHARE};
pub use result::{FoldAudit, InstancePrediction, SplitAudit, TaskAudit, TaskResult};
pub use state_chars::run_state_characteristic_task;
pub use synth::{
    generate_synthetic_corpus, GeoBox, PlantedCounts, PlantedLocale, SyntheticCorpus, SyntheticManifest,
    SyntheticSpec, ANY_DAY_WORDS, EVENING_HOUR, EVENING_WORD, SOUTH_WORD, TOPIC_BOX, UNMATCHED_TAG,
    WEEKDAY_WORDS, WEEKEND_WORDS,
};
