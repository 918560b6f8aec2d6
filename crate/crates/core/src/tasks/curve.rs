use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::TaskConfig;
use super::context::FeatureContext;
use super::locale::{run_locale_task, LocaleLevel};
use crate::error::{Error, Result};
use crate::geonorm::Gazetteer;
use crate::pipeline::PreparedCorpus;

/// Locale accuracy over a grid of train (rows) and test (columns)
/// fractions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningCurve {
    pub level: LocaleLevel,
    pub fractions: Vec<f64>,
    pub accuracy: Vec<Vec<f64>>,
}

pub fn learning_curve(
    prep: &PreparedCorpus,
    features: &FeatureContext,
    level: LocaleLevel,
    gaz: &Gazetteer,
    config: &TaskConfig,
    fractions: &[f64],
) -> Result<LearningCurve> {
    if fractions.is_empty() {
        return Err(Error::invalid("no fractions given"));
    }
    if let Some(f) = fractions.iter().find(|&&f| !(f > 0.0 && f <= 1.0)) {
        return Err(Error::invalid(format!("fraction {f} outside (0, 1]")));
    }
    let cells: Vec<(usize, usize)> = (0..fractions.len())
        .flat_map(|i| (0..fractions.len()).map(move |j| (i, j)))
        .collect();
    let values: Vec<f64> = cells
        .par_iter()
        .map(|&(i, j)| {
            let cfg = TaskConfig {
                train_fraction: fractions[i],
                test_fraction: fractions[j],
                ..config.clone()
            };
            run_locale_task(prep, features, level, gaz, &cfg).map(|r| r.accuracy)
        })
        .collect::<Result<_>>()?;
    Ok(LearningCurve {
        level,
        fractions: fractions.to_vec(),
        accuracy: values.chunks(fractions.len()).map(<[f64]>::to_vec).collect(),
    })
}
