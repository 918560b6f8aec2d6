use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{HashtagFilter, Tweet};
use crate::geonorm::{normalize_location, Gazetteer, NormalizedLocation};
use crate::text::clean_tokens;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceDigest {
    /// File name without directories.
    pub name: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Provenance of a snapshot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub sources: Vec<SourceDigest>,
    pub filter: HashtagFilter,
    /// Nonblank input lines.
    pub line_count: usize,
    pub accept_count: usize,
    /// Malformed lines plus superseded duplicate ids.
    pub reject_count: usize,
    pub duplicate_count: usize,
    /// Well-formed lines without a filter hashtag.
    pub unmatched_count: usize,
    /// Number of tweets with a resolved location, once normalized.
    pub normalized_count: Option<usize>,
}

/// Sealed, immutable tweet collection ordered by `(created_at, id)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSnapshot {
    tweets: Vec<Tweet>,
    normalized: BTreeMap<String, NormalizedLocation>,
    manifest: Manifest,
}

impl CorpusSnapshot {
    /// Seals tweets that already passed the hashtag filter. Later
    /// duplicates of an id replace earlier ones and count as rejects.
    pub fn from_tweets(tweets: Vec<Tweet>, filter: HashtagFilter) -> Self {
        let lines = tweets.len();
        Self::seal(
            tweets,
            Manifest {
                sources: Vec::new(),
                filter,
                line_count: lines,
                accept_count: 0,
                reject_count: 0,
                duplicate_count: 0,
                unmatched_count: 0,
                normalized_count: None,
            },
        )
    }

    pub(crate) fn seal(tweets: Vec<Tweet>, mut manifest: Manifest) -> Self {
        let mut last: HashMap<&str, usize> = HashMap::with_capacity(tweets.len());
        for (i, t) in tweets.iter().enumerate() {
            last.insert(t.id.as_str(), i);
        }
        let keep: HashSet<usize> = last.into_values().collect();
        let duplicates = tweets.len() - keep.len();
        let mut tweets: Vec<Tweet> = tweets
            .into_iter()
            .enumerate()
            .filter(|(i, _)| keep.contains(i))
            .map(|(_, t)| t)
            .collect();
        tweets.sort_by(|a, b| (a.created_at, &a.id).cmp(&(b.created_at, &b.id)));
        manifest.duplicate_count += duplicates;
        manifest.reject_count += duplicates;
        manifest.accept_count = tweets.len();
        CorpusSnapshot {
            tweets,
            normalized: BTreeMap::new(),
            manifest,
        }
    }

    pub(crate) fn from_parts(
        tweets: Vec<Tweet>,
        normalized: BTreeMap<String, NormalizedLocation>,
        manifest: Manifest,
    ) -> Self {
        CorpusSnapshot {
            tweets,
            normalized,
            manifest,
        }
    }

    /// Returns a copy with every tweet's location resolved.
    pub fn normalize(&self, gaz: &Gazetteer) -> Self {
        let normalized: BTreeMap<String, NormalizedLocation> = self
            .tweets
            .iter()
            .filter_map(|t| {
                let raw = t.user_location_raw.as_deref()?;
                let loc = normalize_location(raw, t.user_timezone.as_deref(), gaz)?;
                Some((t.id.clone(), loc))
            })
            .collect();
        let mut manifest = self.manifest.clone();
        manifest.normalized_count = Some(normalized.len());
        CorpusSnapshot {
            tweets: self.tweets.clone(),
            normalized,
            manifest,
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.manifest.normalized_count.is_some()
    }

    pub fn tweets(&self) -> &[Tweet] {
        &self.tweets
    }

    pub fn len(&self) -> usize {
        self.tweets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tweets.is_empty()
    }

    pub fn location(&self, tweet_id: &str) -> Option<&NormalizedLocation> {
        self.normalized.get(tweet_id)
    }

    pub fn normalized(&self) -> &BTreeMap<String, NormalizedLocation> {
        &self.normalized
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }
}

/// Corpus summary numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub tweet_count: usize,
    pub mean_tokens_per_tweet: f64,
    pub unique_token_count: usize,
    pub timezone_fraction: f64,
    pub geo_fraction: f64,
}

/// Token counts use [`clean_tokens`]. An empty snapshot yields zeros.
pub fn corpus_stats(snapshot: &CorpusSnapshot) -> Stats {
    let n = snapshot.len();
    if n == 0 {
        return Stats {
            tweet_count: 0,
            mean_tokens_per_tweet: 0.0,
            unique_token_count: 0,
            timezone_fraction: 0.0,
            geo_fraction: 0.0,
        };
    }
    let mut total = 0usize;
    let mut unique = HashSet::new();
    let (mut tz, mut geo) = (0usize, 0usize);
    for t in snapshot.tweets() {
        let toks = clean_tokens(&t.text);
        total += toks.len();
        unique.extend(toks);
        tz += usize::from(t.user_timezone.is_some());
        geo += usize::from(t.geo.is_some());
    }
    Stats {
        tweet_count: n,
        mean_tokens_per_tweet: total as f64 / n as f64,
        unique_token_count: unique.len(),
        timezone_fraction: tz as f64 / n as f64,
        geo_fraction: geo as f64 / n as f64,
    }
}
