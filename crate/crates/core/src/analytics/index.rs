use rayon::prelude::*;

use crate::corpus::{CorpusSnapshot, GeoPoint};
use crate::error::{Error, Result};
use crate::geonorm::{local_time, LocalTime};
use crate::pipeline::{PreparedCorpus, Resources};
use crate::text::clean_tokens;

/// What the aggregations need from one tweet.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticsDoc {
    pub id: String,
    /// Cleanup-only tokens, used for phrase matching.
    pub clean: Vec<String>,
    /// Feature-filtered tokens, used for term ranking and word clouds.
    pub tokens: Vec<String>,
    pub state: Option<String>,
    /// `None` when the author timezone is missing or unknown.
    pub local: Option<LocalTime>,
    pub geo: Option<GeoPoint>,
}

#[derive(Debug, Clone, Default)]
pub struct AnalyticsCorpus {
    docs: Vec<AnalyticsDoc>,
}

impl AnalyticsCorpus {
    pub fn build(snapshot: &CorpusSnapshot, res: &Resources) -> Self {
        let prep = PreparedCorpus::prepare(snapshot, res);
        Self::from_prepared(snapshot, &prep, res)
            .expect("a corpus prepared from the same snapshot lines up")
    }

    /// Joins a snapshot with a corpus prepared from it.
    pub fn from_prepared(snapshot: &CorpusSnapshot, prep: &PreparedCorpus, res: &Resources) -> Result<Self> {
        if snapshot.len() != prep.len() {
            return Err(Error::LengthMismatch(format!(
                "snapshot has {} tweets, prepared corpus {}",
                snapshot.len(),
                prep.len()
            )));
        }
        let gaz = &res.gazetteer;
        let docs = snapshot
            .tweets()
            .par_iter()
            .zip(prep.tweets().par_iter())
            .map(|(t, p)| {
                if t.id != p.id {
                    return Err(Error::LengthMismatch(format!("tweet {} paired with {}", t.id, p.id)));
                }
                Ok(AnalyticsDoc {
                    id: t.id.clone(),
                    clean: clean_tokens(&t.text),
                    tokens: p.tokens.clone(),
                    state: p.location.as_ref().map(|l| l.state.clone()),
                    local: t.user_timezone.as_deref().and_then(|tz| local_time(t.created_at, tz, gaz)),
                    geo: t.geo,
                })
            })
            .collect::<Result<_>>()?;
        Ok(AnalyticsCorpus { docs })
    }

    pub fn from_docs(docs: Vec<AnalyticsDoc>) -> Self {
        AnalyticsCorpus { docs }
    }

    pub fn docs(&self) -> &[AnalyticsDoc] {
        &self.docs
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }
}

/// Tokenizes a query phrase the same way tweets are cleaned.
pub(crate) fn phrase_tokens(phrase: &str) -> Result<Vec<String>> {
    let toks = clean_tokens(phrase);
    if toks.is_empty() {
        return Err(Error::invalid("phrase must contain at least one word"));
    }
    Ok(toks)
}

/// True when `needle` occurs as a contiguous run of `hay`.
pub(crate) fn contains_phrase(hay: &[String], needle: &[String]) -> bool {
    !needle.is_empty() && hay.windows(needle.len()).any(|w| w == needle)
}
