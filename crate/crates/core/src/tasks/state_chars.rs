use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use super::bootstrap::bootstrap_significance;
use super::config::TaskConfig;
use super::context::FeatureContext;
use super::labels::StateLabelSet;
use super::result::{FoldAudit, InstancePrediction, TaskAudit, TaskResult};
use crate::error::{Error, Result};
use crate::learn::{top_weighted_features, train_binary_svm, SparseVector, WeightSign};
use crate::pipeline::PreparedCorpus;

/// Tweet indices per state, for every state in `labels`.
pub(crate) fn group_by_state(prep: &PreparedCorpus, labels: &StateLabelSet) -> Result<Vec<(String, Vec<usize>)>> {
    let mut groups: BTreeMap<&str, Vec<usize>> = labels.labels.keys().map(|s| (s.as_str(), Vec::new())).collect();
    for (i, t) in prep.tweets().iter().enumerate() {
        if let Some(g) = t.location.as_ref().and_then(|l| groups.get_mut(l.state.as_str())) {
            g.push(i);
        }
    }
    let missing: Vec<String> = groups
        .iter()
        .filter(|(_, v)| v.is_empty())
        .map(|(s, _)| s.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingLocales(missing));
    }
    Ok(groups.into_iter().map(|(s, v)| (s.to_string(), v)).collect())
}

/// Leave-one-state-out evaluation of a binary state characteristic.
///
/// Each state's tweets are pooled into one instance; every fold trains on
/// the other 50 states and predicts the held-out one.
pub fn run_state_characteristic_task(
    prep: &PreparedCorpus,
    features: &FeatureContext,
    labels: &StateLabelSet,
    config: &TaskConfig,
) -> Result<TaskResult> {
    config.validate()?;
    let start = Instant::now();
    let groups = group_by_state(prep, labels)?;
    let states: Vec<&str> = groups.iter().map(|(s, _)| s.as_str()).collect();
    let instances: Vec<SparseVector> = groups
        .par_iter()
        .map(|(_, idx)| features.pool(prep, idx))
        .collect::<Result<_>>()?;
    let y: Vec<i8> = states.iter().map(|s| labels.sign(s).expect("labelled state")).collect();
    let hash = features.space().hash();
    let n = states.len();

    let folds: Vec<(i8, FoldAudit)> = (0..n)
        .into_par_iter()
        .map(|held| {
            let train: Vec<usize> = (0..n).filter(|&j| j != held).collect();
            let xs: Vec<SparseVector> = train.iter().map(|&j| instances[j].clone()).collect();
            let ys: Vec<i8> = train.iter().map(|&j| y[j]).collect();
            let model = train_binary_svm(&xs, &ys, &config.svm, &hash)?;
            let audit = FoldAudit {
                held_out: states[held].to_string(),
                training: train.iter().map(|&j| states[j].to_string()).collect(),
            };
            Ok((model.predict(&instances[held]), audit))
        })
        .collect::<Result<_>>()?;

    let label_of = |s: i8| if s > 0 { labels.positive() } else { labels.negative() };
    let gold: Vec<&str> = y.iter().map(|&s| label_of(s)).collect();
    let predicted: Vec<&str> = folds.iter().map(|(p, _)| label_of(*p)).collect();
    let majority = labels.majority_label();
    let baseline_preds = vec![majority; n];
    let correct = gold.iter().zip(&predicted).filter(|(g, p)| g == p).count();
    let p_value = bootstrap_significance(&gold, &predicted, &baseline_preds, config.bootstrap_iterations, config.seed)?;

    let full = train_binary_svm(&instances, &y, &config.svm, &hash)?;
    let mut top_features = BTreeMap::new();
    top_features.insert(
        labels.positive().to_string(),
        top_weighted_features(&full, WeightSign::Positive, config.top_k, features.space(), features.topic_model()),
    );
    top_features.insert(
        labels.negative().to_string(),
        top_weighted_features(&full, WeightSign::Negative, config.top_k, features.space(), features.topic_model()),
    );

    Ok(TaskResult {
        task: format!("state-chars/{}", labels.dataset),
        config: config.clone(),
        accuracy: correct as f64 / n as f64,
        baseline: labels.majority_baseline(),
        correct,
        instances: n,
        p_value: Some(p_value),
        per_instance: states
            .iter()
            .zip(gold.iter().zip(&predicted))
            .map(|(s, (g, p))| InstancePrediction {
                instance: s.to_string(),
                gold: g.to_string(),
                predicted: p.to_string(),
            })
            .collect(),
        top_features,
        runtime_ms: start.elapsed().as_millis() as u64,
        audit: TaskAudit {
            folds: folds.into_iter().map(|(_, a)| a).collect(),
            splits: Vec::new(),
        },
    })
}
