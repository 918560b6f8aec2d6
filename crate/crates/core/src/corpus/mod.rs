//! Tweet ingestion, hashtag filtering, sealed snapshots and their on-disk
//! format.

mod filter;
mod format;
mod ingest;
mod snapshot;

pub use filter::{filter_by_hashtags, FieldMapping, Filtered, HashtagFilter, DEFAULT_HASHTAGS};
pub use ingest::{ingest_jsonl, ingest_reader};
pub use snapshot::{corpus_stats, CorpusSnapshot, Manifest, SourceDigest, Stats};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// Longest accepted tweet text in bytes.
pub const MAX_TEXT_BYTES: usize = 560;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    pub fn in_bounds(&self) -> bool {
        (-90.0..=90.0).contains(&self.lat) && (-180.0..=180.0).contains(&self.lon)
    }
}

/// One collected post.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tweet {
    pub id: String,
    pub text: String,
    /// UTC seconds since the Unix epoch.
    pub created_at: i64,
    pub user_location_raw: Option<String>,
    pub user_timezone: Option<String>,
    pub geo: Option<GeoPoint>,
    pub matched_hashtags: BTreeSet<String>,
}

impl Tweet {
    /// JSONL form accepted by [`ingest_jsonl`] with the default field
    /// mapping.
    pub fn to_json(&self) -> serde_json::Value {
        let mut user = serde_json::Map::new();
        if let Some(loc) = &self.user_location_raw {
            user.insert("location".into(), loc.clone().into());
        }
        if let Some(tz) = &self.user_timezone {
            user.insert("time_zone".into(), tz.clone().into());
        }
        let mut obj = serde_json::Map::new();
        obj.insert("id".into(), self.id.clone().into());
        obj.insert("text".into(), self.text.clone().into());
        obj.insert("created_at".into(), self.created_at.into());
        obj.insert("user".into(), user.into());
        if let Some(g) = self.geo {
            obj.insert("coordinates".into(), serde_json::json!({"lat": g.lat, "lon": g.lon}));
        }
        obj.into()
    }
}
