use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::index::AnalyticsCorpus;
use crate::text::VocabMode;

/// Number of state documents in the idf denominator.
pub const STATE_DOCUMENTS: f64 = 51.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermScore {
    pub term: String,
    pub state: String,
    pub tf: u64,
    pub df: u64,
    /// `tf * ln(51 / df)`
    pub score: f64,
}

/// Every (state, term) score, states as documents.
pub fn term_scores(corpus: &AnalyticsCorpus, mode: VocabMode, food: &HashSet<String>) -> BTreeMap<String, Vec<TermScore>> {
    let mut tf: BTreeMap<&str, HashMap<&str, u64>> = BTreeMap::new();
    for doc in corpus.docs() {
        let Some(state) = doc.state.as_deref() else { continue };
        let counts = tf.entry(state).or_default();
        for t in doc.tokens.iter().filter(|t| mode.admits(t, food)) {
            *counts.entry(t.as_str()).or_default() += 1;
        }
    }
    let mut df: HashMap<&str, u64> = HashMap::new();
    for counts in tf.values() {
        for term in counts.keys() {
            *df.entry(term).or_default() += 1;
        }
    }
    tf.into_iter()
        .filter_map(|(state, counts)| {
            if counts.is_empty() {
                log::warn!("state {state} has no {mode} terms; omitted");
                return None;
            }
            let mut scores: Vec<TermScore> = counts
                .into_iter()
                .map(|(term, n)| {
                    let d = df[term];
                    TermScore {
                        term: term.to_string(),
                        state: state.to_string(),
                        tf: n,
                        df: d,
                        score: n as f64 * (STATE_DOCUMENTS / d as f64).ln(),
                    }
                })
                .collect();
            scores.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.term.cmp(&b.term)));
            Some((state.to_string(), scores))
        })
        .collect()
}

/// Highest-scoring term per state, ties to the lexicographically first.
pub fn rank_terms_tfidf(corpus: &AnalyticsCorpus, mode: VocabMode, food: &HashSet<String>) -> BTreeMap<String, TermScore> {
    term_scores(corpus, mode, food)
        .into_iter()
        .filter_map(|(state, mut v)| (!v.is_empty()).then(|| (state, v.swap_remove(0))))
        .collect()
}
