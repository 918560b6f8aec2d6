use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::index::{contains_phrase, phrase_tokens, AnalyticsCorpus};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    /// 24 bins, local hour 0-23.
    Hour,
    /// 7 bins, Monday first.
    Weekday,
    /// 12 bins, January first.
    Month,
}

impl Granularity {
    pub fn bins(self) -> usize {
        match self {
            Granularity::Hour => 24,
            Granularity::Weekday => 7,
            Granularity::Month => 12,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Granularity::Hour => "hour",
            Granularity::Weekday => "weekday",
            Granularity::Month => "month",
        }
    }
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Granularity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hour" => Ok(Granularity::Hour),
            "weekday" | "day" => Ok(Granularity::Weekday),
            "month" => Ok(Granularity::Month),
            other => Err(Error::invalid(format!("unknown granularity {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramBins {
    pub granularity: Granularity,
    pub phrase: String,
    pub bins: Vec<u64>,
    pub total: u64,
}

/// Counts timezone-known tweets containing `phrase`, by local time.
pub fn temporal_histogram(corpus: &AnalyticsCorpus, phrase: &str, granularity: Granularity) -> Result<HistogramBins> {
    let needle = phrase_tokens(phrase)?;
    let mut bins = vec![0u64; granularity.bins()];
    for doc in corpus.docs() {
        let Some(lt) = doc.local else { continue };
        if !contains_phrase(&doc.clean, &needle) {
            continue;
        }
        let bin = match granularity {
            Granularity::Hour => lt.hour as usize,
            Granularity::Weekday => lt.weekday.num_days_from_monday() as usize,
            Granularity::Month => lt.month as usize - 1,
        };
        bins[bin] += 1;
    }
    Ok(HistogramBins {
        granularity,
        phrase: needle.join(" "),
        total: bins.iter().sum(),
        bins,
    })
}
