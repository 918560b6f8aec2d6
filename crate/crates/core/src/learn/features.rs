use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

use super::sparse::SparseVector;
use crate::error::{Error, Result};
use crate::text::Vocabulary;

/// Word features `0..|V|` followed by one count feature per topic.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpace {
    vocab: Vocabulary,
    topics: usize,
}

impl FeatureSpace {
    pub fn new(vocab: Vocabulary, topics: usize) -> Self {
        FeatureSpace { vocab, topics }
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn topics(&self) -> usize {
        self.topics
    }

    pub fn dim(&self) -> usize {
        self.vocab.len() + self.topics
    }

    /// Feature id of topic `k`.
    pub fn topic_feature(&self, k: usize) -> usize {
        self.vocab.len() + k
    }

    /// Topic id when `feature` is a topic feature.
    pub fn as_topic(&self, feature: usize) -> Option<usize> {
        feature.checked_sub(self.vocab.len()).filter(|&k| k < self.topics)
    }

    /// Hex SHA-256 identifying the space.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.vocab.digest().as_bytes());
        h.update((self.topics as u64).to_le_bytes());
        hex::encode(h.finalize())
    }
}

/// Pools a group of tweets into one instance.
///
/// Word features count occurrences across the group; with `topic_of` (one
/// topic id per tweet), topic feature `k` counts the tweets whose top topic
/// is `k`. Every value is then divided by the number of tweets.
/// Out-of-vocabulary tokens are ignored.
pub fn featurize_group(
    docs: &[&[String]],
    space: &FeatureSpace,
    topic_of: Option<&[usize]>,
) -> Result<SparseVector> {
    if docs.is_empty() {
        return Err(Error::EmptyGroup);
    }
    let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
    for doc in docs {
        for t in doc.iter() {
            if let Some(id) = space.vocab.id(t) {
                *counts.entry(id).or_default() += 1.0;
            }
        }
    }
    if let Some(topics) = topic_of {
        if topics.len() != docs.len() {
            return Err(Error::LengthMismatch(format!(
                "{} topic assignments for {} tweets",
                topics.len(),
                docs.len()
            )));
        }
        for &k in topics {
            if k >= space.topics {
                return Err(Error::TopicOutOfRange {
                    topic: k,
                    topics: space.topics,
                });
            }
            *counts.entry(space.topic_feature(k)).or_default() += 1.0;
        }
    }
    let n = docs.len() as f64;
    SparseVector::from_pairs(space.dim(), counts.into_iter().map(|(id, c)| (id, c / n)))
}
