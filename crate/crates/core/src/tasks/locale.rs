use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bootstrap::bootstrap_significance;
use super::config::TaskConfig;
use super::context::FeatureContext;
use super::result::{InstancePrediction, SplitAudit, TaskAudit, TaskResult};
use crate::error::{Error, Result};
use crate::geonorm::{Gazetteer, NormalizedLocation, Region};
use crate::learn::{top_weighted_features, train_ovr_svm, SparseVector, WeightSign};
use crate::pipeline::PreparedCorpus;

/// Minimum tweets per locale.
pub const MIN_LOCALE_TWEETS: usize = 5;

/// Share of each locale's tweets (earliest first) used for training.
pub const TRAIN_SHARE: f64 = 0.8;

/// The 15 most populous US cities with their states.
pub const CITY15: [(&str, &str); 15] = [
    ("New York City", "NY"),
    ("Los Angeles", "CA"),
    ("Chicago", "IL"),
    ("Houston", "TX"),
    ("Philadelphia", "PA"),
    ("Phoenix", "AZ"),
    ("San Antonio", "TX"),
    ("San Diego", "CA"),
    ("Dallas", "TX"),
    ("San Jose", "CA"),
    ("Austin", "TX"),
    ("Indianapolis", "IN"),
    ("Jacksonville", "FL"),
    ("San Francisco", "CA"),
    ("Columbus", "OH"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocaleLevel {
    City,
    State,
    Region,
}

impl LocaleLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            LocaleLevel::City => "city",
            LocaleLevel::State => "state",
            LocaleLevel::Region => "region",
        }
    }

    /// Locale labels in class order.
    pub fn locales(self, gaz: &Gazetteer) -> Vec<String> {
        match self {
            LocaleLevel::City => CITY15.iter().map(|(c, _)| c.to_string()).collect(),
            LocaleLevel::State => gaz.state_codes().map(str::to_string).collect(),
            LocaleLevel::Region => Region::ALL.iter().map(|r| r.to_string()).collect(),
        }
    }

    /// Locale of a resolved author location at this level.
    pub fn locale_of(self, loc: &NormalizedLocation) -> Option<String> {
        match self {
            LocaleLevel::City => {
                let city = loc.city.as_deref()?;
                CITY15
                    .iter()
                    .find(|(c, s)| *c == city && *s == loc.state)
                    .map(|(c, _)| c.to_string())
            }
            LocaleLevel::State => Some(loc.state.clone()),
            LocaleLevel::Region => Some(loc.region.to_string()),
        }
    }

    /// Accuracy of guessing uniformly among the locales.
    pub fn random_baseline(self, gaz: &Gazetteer) -> f64 {
        1.0 / self.locales(gaz).len() as f64
    }
}

impl fmt::Display for LocaleLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LocaleLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "city" | "city15" => Ok(LocaleLevel::City),
            "state" | "state51" => Ok(LocaleLevel::State),
            "region" | "region4" => Ok(LocaleLevel::Region),
            other => Err(Error::invalid(format!("unknown locale level {other:?}"))),
        }
    }
}

/// Chronological split of one locale's tweets (already in time order):
/// the first 80% train and the rest test, then each side cut to a prefix
/// of `ceil(fraction * len)` (at least one tweet).
pub fn chronological_split(indices: &[usize], train_fraction: f64, test_fraction: f64) -> (Vec<usize>, Vec<usize>) {
    let n = indices.len();
    let n_train = ((n as f64 * TRAIN_SHARE).floor() as usize).clamp(1, n.saturating_sub(1).max(1));
    let (train, test) = indices.split_at(n_train);
    let prefix = |side: &[usize], f: f64| {
        let k = ((side.len() as f64 * f).ceil() as usize).clamp(1.min(side.len()), side.len());
        side[..k].to_vec()
    };
    (prefix(train, train_fraction), prefix(test, test_fraction))
}

/// Tweet indices per locale in time order, checking minimum sizes.
pub(crate) fn group_by_locale(
    prep: &PreparedCorpus,
    level: LocaleLevel,
    gaz: &Gazetteer,
) -> Result<Vec<(String, Vec<usize>)>> {
    let locales = level.locales(gaz);
    let mut groups: BTreeMap<String, Vec<usize>> = locales.iter().map(|l| (l.clone(), Vec::new())).collect();
    for (i, t) in prep.tweets().iter().enumerate() {
        if let Some(g) = t.location.as_ref().and_then(|l| level.locale_of(l)).and_then(|l| groups.get_mut(&l)) {
            g.push(i);
        }
    }
    let small: Vec<String> = locales
        .iter()
        .filter(|l| groups[*l].len() < MIN_LOCALE_TWEETS)
        .cloned()
        .collect();
    if !small.is_empty() {
        return Err(Error::LocaleTooSmall {
            min: MIN_LOCALE_TWEETS,
            locales: small,
        });
    }
    let tweets = prep.tweets();
    Ok(locales
        .into_iter()
        .map(|l| {
            let mut idx = groups.remove(&l).unwrap_or_default();
            idx.sort_by(|&a, &b| (tweets[a].created_at, &tweets[a].id).cmp(&(tweets[b].created_at, &tweets[b].id)));
            (l, idx)
        })
        .collect())
}

/// Predicts the author locale of each locale's pooled test tweets with a
/// one-vs-rest SVM trained on one pooled instance per locale.
pub fn run_locale_task(
    prep: &PreparedCorpus,
    features: &FeatureContext,
    level: LocaleLevel,
    gaz: &Gazetteer,
    config: &TaskConfig,
) -> Result<TaskResult> {
    config.validate()?;
    let start = Instant::now();
    let groups = group_by_locale(prep, level, gaz)?;
    let classes: Vec<String> = groups.iter().map(|(l, _)| l.clone()).collect();
    let tweets = prep.tweets();

    let splits: Vec<(Vec<usize>, Vec<usize>)> = groups
        .iter()
        .map(|(_, idx)| chronological_split(idx, config.train_fraction, config.test_fraction))
        .collect();
    let audits: Vec<SplitAudit> = groups
        .iter()
        .zip(&splits)
        .map(|((l, _), (tr, te))| SplitAudit {
            locale: l.clone(),
            n_train: tr.len(),
            n_test: te.len(),
            train_max: tr.iter().map(|&i| tweets[i].created_at).max().unwrap_or(i64::MIN),
            test_min: te.iter().map(|&i| tweets[i].created_at).min().unwrap_or(i64::MAX),
        })
        .collect();
    let pooled: Vec<(SparseVector, SparseVector)> = splits
        .par_iter()
        .map(|(tr, te)| Ok((features.pool(prep, tr)?, features.pool(prep, te)?)))
        .collect::<Result<_>>()?;
    let (train_x, test_x): (Vec<SparseVector>, Vec<SparseVector>) = pooled.into_iter().unzip();

    let model = train_ovr_svm(&train_x, &classes, &classes, &config.svm, &features.space().hash())?;
    let predicted: Vec<String> = test_x.iter().map(|x| model.predict(x).to_string()).collect();
    let correct = classes.iter().zip(&predicted).filter(|(g, p)| g == p).count();
    let n = classes.len();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let random_preds: Vec<String> = (0..n).map(|_| classes[rng.gen_range(0..n)].clone()).collect();
    let p_value = bootstrap_significance(&classes, &predicted, &random_preds, config.bootstrap_iterations, config.seed)?;

    let top_features = classes
        .iter()
        .zip(model.models())
        .map(|(c, m)| {
            let top = top_weighted_features(m, WeightSign::Positive, config.top_k, features.space(), features.topic_model());
            (c.clone(), top)
        })
        .collect();

    Ok(TaskResult {
        task: format!("locale/{level}"),
        config: config.clone(),
        accuracy: correct as f64 / n as f64,
        baseline: 1.0 / n as f64,
        correct,
        instances: n,
        p_value: Some(p_value),
        per_instance: classes
            .iter()
            .zip(&predicted)
            .map(|(g, p)| InstancePrediction {
                instance: g.clone(),
                gold: g.clone(),
                predicted: p.clone(),
            })
            .collect(),
        top_features,
        runtime_ms: start.elapsed().as_millis() as u64,
        audit: TaskAudit {
            folds: Vec::new(),
            splits: audits,
        },
    })
}
