//! Shared preprocessing: tokenized and filtered tweets with their resolved
//! locations, computed once per snapshot.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::corpus::CorpusSnapshot;
use crate::data::DataSet;
use crate::error::Result;
use crate::geonorm::{Gazetteer, NormalizedLocation};
use crate::text::{clean_tokens, filter_tokens, singleton_set, tokenize, LocationLexicon};

/// Lookup tables loaded from a [`DataSet`].
#[derive(Debug, Clone)]
pub struct Resources {
    pub gazetteer: Gazetteer,
    pub stopwords: HashSet<String>,
    pub food: HashSet<String>,
    pub locations: LocationLexicon,
    pub data: DataSet,
}

impl Resources {
    pub fn load(data: &DataSet) -> Result<Self> {
        let gazetteer = data.gazetteer()?;
        let locations = gazetteer.location_lexicon();
        Ok(Resources {
            gazetteer,
            stopwords: data.stopwords(),
            food: data.food_lexicon(),
            locations,
            data: data.clone(),
        })
    }

    pub fn embedded() -> Result<Self> {
        Self::load(&DataSet::embedded())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreparedTweet {
    pub id: String,
    pub created_at: i64,
    /// Tokens after the full filter (stopwords, singletons, locations, ...).
    pub tokens: Vec<String>,
    /// [`clean_tokens`] of the text, used for phrase queries and statistics.
    pub clean: Vec<String>,
    pub location: Option<NormalizedLocation>,
}

/// A snapshot's tweets in snapshot order, ready for feature extraction.
#[derive(Debug, Clone)]
pub struct PreparedCorpus {
    tweets: Vec<PreparedTweet>,
}

impl PreparedCorpus {
    /// Normalizes locations first when the snapshot has not been.
    pub fn prepare(snapshot: &CorpusSnapshot, res: &Resources) -> Self {
        let normalized;
        let snapshot = if snapshot.is_normalized() {
            snapshot
        } else {
            normalized = snapshot.normalize(&res.gazetteer);
            &normalized
        };
        let raw: Vec<Vec<String>> = snapshot.tweets().par_iter().map(|t| tokenize(&t.text)).collect();
        let singletons = singleton_set(&raw);
        let tweets = snapshot
            .tweets()
            .par_iter()
            .zip(raw.par_iter())
            .map(|(t, toks)| PreparedTweet {
                id: t.id.clone(),
                created_at: t.created_at,
                tokens: filter_tokens(toks, &res.locations, &res.stopwords, &singletons),
                clean: clean_tokens(&t.text),
                location: snapshot.location(&t.id).cloned(),
            })
            .collect();
        PreparedCorpus { tweets }
    }

    pub fn tweets(&self) -> &[PreparedTweet] {
        &self.tweets
    }

    pub fn len(&self) -> usize {
        self.tweets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tweets.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::corpus::{HashtagFilter, Tweet};

    #[test]
    fn filters_and_locates() {
        let res = Resources::embedded().unwrap();
        let mk = |id: &str, text: &str| Tweet {
            id: id.into(),
            text: text.into(),
            created_at: 0,
            user_location_raw: Some("Austin, TX".into()),
            user_timezone: None,
            geo: None,
            matched_hashtags: BTreeSet::from(["#dinner".to_string()]),
        };
        let snap = CorpusSnapshot::from_tweets(
            vec![mk("1", "the tacos in #texas #dinner"), mk("2", "tacos again #dinner @bob zzonce")],
            HashtagFilter::default(),
        );
        let prep = PreparedCorpus::prepare(&snap, &res);
        assert_eq!(prep.tweets()[0].tokens, ["tacos", "#dinner"]);
        // "again" is a stopword, "zzonce" a singleton
        assert_eq!(prep.tweets()[1].tokens, ["tacos", "#dinner"]);
        assert_eq!(prep.tweets()[0].location.as_ref().unwrap().state, "TX");
    }
}
