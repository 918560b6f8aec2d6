use std::collections::BTreeSet;

use chrono::DateTime;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{GeoPoint, Tweet, MAX_TEXT_BYTES};
use crate::error::{Error, Result};
use crate::text::{is_hashtag, tokenize};

/// Meal hashtags used for collection when no filter is given.
pub const DEFAULT_HASHTAGS: [&str; 7] =
    ["#dinner", "#breakfast", "#lunch", "#brunch", "#snack", "#meal", "#supper"];

/// A nonempty set of lowercase `#`-prefixed hashtags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct HashtagFilter(BTreeSet<String>);

impl HashtagFilter {
    /// Accepts tags with or without the leading `#`, in any case.
    pub fn new<I, S>(tags: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = BTreeSet::new();
        for tag in tags {
            let t = tag.as_ref().trim();
            if t.is_empty() {
                continue;
            }
            let t = crate::text::normalize_text(t);
            let t = if t.starts_with('#') { t } else { format!("#{t}") };
            if !is_hashtag(&t) || t[1..].chars().any(|c| !(c.is_alphanumeric() || c == '_')) {
                return Err(Error::invalid(format!("bad hashtag {t:?}")));
            }
            set.insert(t);
        }
        if set.is_empty() {
            return Err(Error::invalid("hashtag filter is empty"));
        }
        Ok(HashtagFilter(set))
    }

    /// Parses a comma-separated list.
    pub fn parse_csv(list: &str) -> Result<Self> {
        Self::new(list.split(','))
    }

    pub fn tags(&self) -> &BTreeSet<String> {
        &self.0
    }

    pub fn contains(&self, tag: &str) -> bool {
        self.0.contains(tag)
    }
}

impl Default for HashtagFilter {
    fn default() -> Self {
        HashtagFilter(DEFAULT_HASHTAGS.iter().map(|s| s.to_string()).collect())
    }
}

impl TryFrom<Vec<String>> for HashtagFilter {
    type Error = Error;

    fn try_from(v: Vec<String>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<HashtagFilter> for Vec<String> {
    fn from(f: HashtagFilter) -> Self {
        f.0.into_iter().collect()
    }
}

/// JSON pointers locating each tweet field in a source record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FieldMapping {
    pub id: String,
    pub text: String,
    pub created_at: String,
    pub user_location: String,
    pub user_timezone: String,
    pub coordinates: String,
}

impl Default for FieldMapping {
    fn default() -> Self {
        FieldMapping {
            id: "/id".into(),
            text: "/text".into(),
            created_at: "/created_at".into(),
            user_location: "/user/location".into(),
            user_timezone: "/user/time_zone".into(),
            coordinates: "/coordinates".into(),
        }
    }
}

/// Result of filtering a stream.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Filtered {
    pub tweets: Vec<Tweet>,
    /// Records that could not be parsed into a tweet.
    pub rejects: usize,
    /// Well-formed records without any filter hashtag.
    pub unmatched: usize,
}

/// Keeps the posts whose token set contains at least one filter hashtag.
///
/// Malformed records are skipped and tallied; they never abort the stream.
pub fn filter_by_hashtags<I>(stream: I, filter: &HashtagFilter, mapping: &FieldMapping) -> Filtered
where
    I: IntoIterator<Item = Value>,
{
    let mut out = Filtered::default();
    for record in stream {
        let Some(mut tweet) = parse_record(&record, mapping) else {
            out.rejects += 1;
            continue;
        };
        tweet.matched_hashtags = tokenize(&tweet.text)
            .into_iter()
            .filter(|t| filter.contains(t))
            .collect();
        if tweet.matched_hashtags.is_empty() {
            out.unmatched += 1;
        } else {
            out.tweets.push(tweet);
        }
    }
    out
}

fn opt_string(record: &Value, pointer: &str) -> Option<String> {
    match record.pointer(pointer)? {
        Value::String(s) if !s.trim().is_empty() => Some(s.clone()),
        _ => None,
    }
}

fn parse_timestamp(v: &Value) -> Option<i64> {
    match v {
        Value::Number(n) => n.as_i64(),
        Value::String(s) => {
            let s = s.trim();
            if let Ok(secs) = s.parse::<i64>() {
                return Some(secs);
            }
            // Twitter API style, then RFC 3339
            DateTime::parse_from_str(s, "%a %b %d %H:%M:%S %z %Y")
                .or_else(|_| DateTime::parse_from_rfc3339(s))
                .ok()
                .map(|d| d.timestamp())
        }
        _ => None,
    }
}

/// `{lat, lon}` objects, GeoJSON points, or bare `[lon, lat]` arrays.
fn parse_geo(v: &Value) -> Option<Option<GeoPoint>> {
    let point = match v {
        Value::Null => return Some(None),
        Value::Object(o) if o.contains_key("lat") => GeoPoint {
            lat: o.get("lat")?.as_f64()?,
            lon: o.get("lon").or_else(|| o.get("lng"))?.as_f64()?,
        },
        Value::Object(o) => return parse_geo(o.get("coordinates")?),
        Value::Array(a) if a.len() == 2 => GeoPoint {
            lat: a[1].as_f64()?,
            lon: a[0].as_f64()?,
        },
        _ => return None,
    };
    point.in_bounds().then_some(Some(point))
}

fn parse_record(record: &Value, m: &FieldMapping) -> Option<Tweet> {
    let id = match record.pointer(&m.id)? {
        Value::String(s) => s.trim().to_string(),
        Value::Number(n) => n.to_string(),
        _ => return None,
    };
    if id.is_empty() {
        return None;
    }
    let text = record.pointer(&m.text)?.as_str()?.to_string();
    if text.len() > MAX_TEXT_BYTES {
        return None;
    }
    let created_at = parse_timestamp(record.pointer(&m.created_at)?)?;
    let geo = match record.pointer(&m.coordinates) {
        None => None,
        Some(v) => parse_geo(v)?,
    };
    Some(Tweet {
        id,
        text,
        created_at,
        user_location_raw: opt_string(record, &m.user_location),
        user_timezone: opt_string(record, &m.user_timezone),
        geo,
        matched_hashtags: BTreeSet::new(),
    })
}
