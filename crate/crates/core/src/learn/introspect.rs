use serde::{Deserialize, Serialize};

use super::features::FeatureSpace;
use super::svm::LinearModel;
use crate::topics::{top_words, TopicModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightSign {
    Positive,
    Negative,
}

/// A feature as shown in top-feature listings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureDescriptor {
    pub feature: usize,
    /// Token, or `topic N (w1, w2, w3)` for topic features.
    pub name: String,
    pub weight: f64,
}

/// The `k` largest weights of the requested sign by magnitude. Zero weights
/// are never listed; equal magnitudes keep feature-id order.
pub fn top_weighted_features(
    model: &LinearModel,
    sign: WeightSign,
    k: usize,
    space: &FeatureSpace,
    topics: Option<&TopicModel>,
) -> Vec<FeatureDescriptor> {
    let mut picked: Vec<(usize, f64)> = model
        .weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| match sign {
            WeightSign::Positive => w > 0.0,
            WeightSign::Negative => w < 0.0,
        })
        .map(|(i, &w)| (i, w))
        .collect();
    picked.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()).then(a.0.cmp(&b.0)));
    picked
        .into_iter()
        .take(k)
        .map(|(feature, weight)| FeatureDescriptor {
            feature,
            name: feature_name(feature, space, topics),
            weight,
        })
        .collect()
}

fn feature_name(feature: usize, space: &FeatureSpace, topics: Option<&TopicModel>) -> String {
    if let Some(t) = space.as_topic(feature) {
        let words = topics
            .and_then(|m| top_words(m, t, 3).ok())
            .map(|ws| ws.into_iter().map(|(w, _)| w).collect::<Vec<_>>().join(", "))
            .unwrap_or_default();
        return format!("topic {t} ({words})");
    }
    space
        .vocab()
        .token(feature)
        .map(str::to_string)
        .unwrap_or_else(|| format!("feature {feature}"))
}
