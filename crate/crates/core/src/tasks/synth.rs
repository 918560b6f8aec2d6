//! Synthetic corpus generator with planted, recoverable signal.
//!
//! Every tweet carries one meal hashtag and a fixed number of word slots.
//! Each slot is a marker with probability `marker_rate` (split between the
//! author locale's markers and the author state's class markers) and noise
//! otherwise. Optional plants add words tied to local time, region and a
//! geotag box so the exploratory aggregations have known answers.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{TimeZone, Utc};
use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::labels::{LabelDataset, StateLabelSet};
use super::locale::{LocaleLevel, CITY15};
use crate::corpus::DEFAULT_HASHTAGS;
use crate::error::{Error, Result};
use crate::geonorm::{Gazetteer, Region};
use crate::pipeline::Resources;

/// Hashtag on generated tweets that the default filter drops.
pub const UNMATCHED_TAG: &str = "#yum";
pub const WEEKEND_WORDS: [&str; 2] = ["brunch", "family"];
pub const WEEKDAY_WORDS: [&str; 1] = ["work"];
pub const ANY_DAY_WORDS: [&str; 1] = ["dinner"];
pub const EVENING_WORD: &str = "wine";
pub const EVENING_HOUR: u32 = 20;
pub const SOUTH_WORD: &str = "grits";

/// Axis-aligned lat/lon box, half-open on the upper edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoBox {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
}

impl GeoBox {
    pub fn contains(&self, lat: f64, lon: f64) -> bool {
        lat >= self.lat_min && lat < self.lat_max && lon >= self.lon_min && lon < self.lon_max
    }
}

pub const TOPIC_BOX: GeoBox = GeoBox {
    lat_min: 33.0,
    lat_max: 35.0,
    lon_min: -98.0,
    lon_max: -95.0,
};

const US_BOX: GeoBox = GeoBox {
    lat_min: 25.0,
    lat_max: 49.0,
    lon_min: -124.0,
    lon_max: -67.0,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticSpec {
    pub name: String,
    /// `state` (51 locales) or `city` (the 15 large cities).
    pub level: LocaleLevel,
    pub tweets_per_locale: usize,
    pub tokens_per_tweet: usize,
    /// Probability that a word slot holds a marker.
    pub marker_rate: f64,
    /// Share of marker slots given to locale markers; the rest are class markers.
    pub locale_marker_share: f64,
    pub markers_per_locale: usize,
    pub markers_per_class: usize,
    pub noise_vocab: usize,
    /// Share of noise slots drawn from common food words.
    pub food_noise_rate: f64,
    pub food_noise_words: usize,
    pub timezone_fraction: f64,
    pub geo_fraction: f64,
    /// Extra tweets per locale carrying only a non-meal hashtag.
    pub unmatched_fraction: f64,
    pub malformed_lines: usize,
    /// Adds the temporal, regional and geotag-box plants.
    pub plants: bool,
    pub plant_rate: f64,
    pub topic_fraction: f64,
    pub topic_words: usize,
    pub start: i64,
    pub span_days: u32,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            name: "default".into(),
            level: LocaleLevel::State,
            tweets_per_locale: 1000,
            tokens_per_tweet: 8,
            marker_rate: 0.3,
            locale_marker_share: 0.5,
            markers_per_locale: 5,
            markers_per_class: 5,
            noise_vocab: 2000,
            food_noise_rate: 0.2,
            food_noise_words: 30,
            timezone_fraction: 0.7,
            geo_fraction: 0.1,
            unmatched_fraction: 0.02,
            malformed_lines: 5,
            plants: true,
            plant_rate: 0.2,
            topic_fraction: 0.02,
            topic_words: 5,
            // 2014-01-01T00:00:00Z
            start: 1_388_534_400,
            span_days: 365,
        }
    }
}

impl SyntheticSpec {
    pub const PRESETS: [&'static str; 4] = ["default", "cities", "null", "small"];

    /// Named presets: `default` (51 states x 1000 tweets), `cities`
    /// (15 cities), `null` (no markers, no plants) and `small`
    /// (51 states x 120 tweets).
    pub fn preset(name: &str) -> Result<Self> {
        let base = SyntheticSpec::default();
        let spec = match name {
            "default" => base,
            "cities" => SyntheticSpec {
                name: name.into(),
                level: LocaleLevel::City,
                ..base
            },
            "null" => SyntheticSpec {
                name: name.into(),
                marker_rate: 0.0,
                plants: false,
                ..base
            },
            "small" => SyntheticSpec {
                name: name.into(),
                tweets_per_locale: 120,
                ..base
            },
            other => {
                return Err(Error::invalid(format!(
                    "unknown synthetic spec {other:?} (expected one of {})",
                    Self::PRESETS.join(", ")
                )))
            }
        };
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("marker_rate", self.marker_rate),
            ("locale_marker_share", self.locale_marker_share),
            ("food_noise_rate", self.food_noise_rate),
            ("timezone_fraction", self.timezone_fraction),
            ("geo_fraction", self.geo_fraction),
            ("unmatched_fraction", self.unmatched_fraction),
            ("plant_rate", self.plant_rate),
            ("topic_fraction", self.topic_fraction),
        ];
        for (name, r) in rates {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::invalid(format!("{name} = {r} is outside [0, 1]")));
            }
        }
        if self.level == LocaleLevel::Region {
            return Err(Error::invalid("synthetic locales must be states or cities"));
        }
        if self.tweets_per_locale == 0 || self.tokens_per_tweet == 0 {
            return Err(Error::invalid("tweets_per_locale and tokens_per_tweet must be positive"));
        }
        if self.marker_rate > 0.0 && (self.markers_per_locale == 0 || self.markers_per_class == 0) {
            return Err(Error::invalid("marker vocabularies must be nonempty"));
        }
        if self.marker_rate < 1.0 && self.noise_vocab == 0 && self.food_noise_rate < 1.0 {
            return Err(Error::invalid("noise_vocab must be positive"));
        }
        if self.span_days == 0 {
            return Err(Error::invalid("span_days must be positive"));
        }
        Ok(())
    }
}

/// One generated locale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedLocale {
    pub locale: String,
    pub state: String,
    pub location: String,
    pub timezone: String,
    pub markers: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PlantedCounts {
    pub line_count: usize,
    /// Tweets carrying a default meal hashtag.
    pub matching_count: usize,
    pub unmatched_count: usize,
    pub malformed_count: usize,
    pub timezone_count: usize,
    pub geo_count: usize,
    /// Cleaned tokens summed over matching tweets.
    pub token_total: usize,
    pub unique_tokens: usize,
    /// Matching tweets per planted word.
    pub plant_tweets: BTreeMap<String, usize>,
}

/// Ground truth written next to the generated JSONL.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticManifest {
    pub spec: SyntheticSpec,
    pub seed: u64,
    pub locales: Vec<PlantedLocale>,
    /// dataset -> label -> marker words.
    pub class_markers: BTreeMap<String, BTreeMap<String, Vec<String>>>,
    pub topic_vocabularies: BTreeMap<String, Vec<String>>,
    pub topic_box: Option<GeoBox>,
    pub south_states: Vec<String>,
    pub food_noise: Vec<String>,
    /// Lower accuracy bounds (signal) or baselines (no signal).
    pub expected: BTreeMap<String, f64>,
    pub counts: PlantedCounts,
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub lines: Vec<String>,
    pub manifest: SyntheticManifest,
}

impl SyntheticCorpus {
    /// Path of the manifest written alongside `jsonl`.
    pub fn manifest_path(jsonl: &Path) -> PathBuf {
        let mut s = jsonl.as_os_str().to_owned();
        s.push(".manifest.json");
        PathBuf::from(s)
    }

    /// Writes the JSONL file and its manifest.
    pub fn write(&self, path: &Path) -> Result<PathBuf> {
        let mut out = std::io::BufWriter::new(fs::File::create(path).map_err(|e| Error::io(path, e))?);
        for line in &self.lines {
            writeln!(out, "{line}").map_err(|e| Error::io(path, e))?;
        }
        out.flush().map_err(|e| Error::io(path, e))?;
        let mpath = Self::manifest_path(path);
        let json = serde_json::to_string_pretty(&self.manifest)?;
        fs::write(&mpath, json).map_err(|e| Error::io(&mpath, e))?;
        Ok(mpath)
    }
}

/// Local (hour, weekday with 0 = Sunday) for a UTC timestamp and offset.
fn local_hour_weekday(created_at: i64, offset_min: i32) -> (u32, u32) {
    let local = created_at + i64::from(offset_min) * 60;
    let day = local.div_euclid(86_400);
    // 1970-01-01 was a Thursday.
    let weekday = (day + 4).rem_euclid(7) as u32;
    let hour = (local.rem_euclid(86_400) / 3600) as u32;
    (hour, weekday)
}

struct WordMaker<'a> {
    taken: HashSet<String>,
    res: &'a Resources,
}

impl WordMaker<'_> {
    fn make(&mut self, rng: &mut ChaCha8Rng) -> String {
        const ONSETS: [&str; 16] = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "qu", "th"];
        const VOWELS: [&str; 5] = ["a", "e", "i", "o", "u"];
        loop {
            let syllables = rng.gen_range(2..=4);
            let w: String = (0..syllables)
                .map(|_| format!("{}{}", ONSETS.choose(rng).unwrap(), VOWELS.choose(rng).unwrap()))
                .collect();
            let clashes = self.res.stopwords.contains(&w)
                || self.res.food.contains(&w)
                || self.res.locations.contains_token(&w)
                || self.taken.contains(&w);
            if !clashes {
                self.taken.insert(w.clone());
                return w;
            }
        }
    }

    fn many(&mut self, n: usize, rng: &mut ChaCha8Rng) -> Vec<String> {
        (0..n).map(|_| self.make(rng)).collect()
    }
}

fn timezone_name(gaz: &Gazetteer, offset: i32) -> Option<String> {
    let names: Vec<&String> = gaz.timezones().iter().filter(|(_, &o)| o == offset).map(|(n, _)| n).collect();
    names
        .iter()
        .find(|n| n.contains("(US & Canada)"))
        .or_else(|| names.first())
        .map(|n| n.to_string())
}

fn plan_locales(spec: &SyntheticSpec, gaz: &Gazetteer) -> Result<Vec<PlantedLocale>> {
    let tz_for = |state: &str| -> Result<String> {
        gaz.state_tz_offset(state)
            .and_then(|o| timezone_name(gaz, o))
            .ok_or_else(|| Error::invalid(format!("no timezone known for {state}")))
    };
    match spec.level {
        LocaleLevel::City => CITY15
            .iter()
            .map(|(city, st)| {
                Ok(PlantedLocale {
                    locale: city.to_string(),
                    state: st.to_string(),
                    location: format!("{city}, {st}"),
                    timezone: tz_for(st)?,
                    markers: Vec::new(),
                })
            })
            .collect(),
        _ => gaz
            .state_codes()
            .map(|st| {
                let name = gaz.state_name(st).unwrap_or(st);
                let location = if st == "DC" {
                    "Washington, DC".to_string()
                } else {
                    format!("{name}, USA")
                };
                Ok(PlantedLocale {
                    locale: st.to_string(),
                    state: st.to_string(),
                    location,
                    timezone: tz_for(st)?,
                    markers: Vec::new(),
                })
            })
            .collect(),
    }
}

fn format_created_at(ts: i64) -> String {
    Utc.timestamp_opt(ts, 0)
        .single()
        .map(|d| d.format("%a %b %d %H:%M:%S +0000 %Y").to_string())
        .unwrap_or_else(|| ts.to_string())
}

fn random_point_outside(rng: &mut ChaCha8Rng, inner: Option<&GeoBox>) -> (f64, f64) {
    loop {
        let lat = rng.gen_range(US_BOX.lat_min..US_BOX.lat_max);
        let lon = rng.gen_range(US_BOX.lon_min..US_BOX.lon_max);
        if inner.map_or(true, |b| !b.contains(lat, lon)) {
            return (lat, lon);
        }
    }
}

/// Generates a synthetic JSONL corpus and its ground-truth manifest.
pub fn generate_synthetic_corpus(spec: &SyntheticSpec, seed: u64, res: &Resources) -> Result<SyntheticCorpus> {
    spec.validate()?;
    let gaz = &res.gazetteer;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut maker = WordMaker {
        taken: HashSet::new(),
        res,
    };

    let mut locales = plan_locales(spec, gaz)?;
    for l in &mut locales {
        l.markers = maker.many(spec.markers_per_locale, &mut rng);
    }
    let label_sets: Vec<StateLabelSet> = LabelDataset::ALL
        .iter()
        .map(|&d| StateLabelSet::load(d, &res.data, gaz))
        .collect::<Result<_>>()?;
    let mut class_markers: BTreeMap<String, BTreeMap<String, Vec<String>>> = BTreeMap::new();
    for set in &label_sets {
        let (a, b) = set.dataset.label_values();
        let entry = class_markers.entry(set.dataset.to_string()).or_default();
        for label in [a, b] {
            entry.insert(label.to_string(), maker.many(spec.markers_per_class, &mut rng));
        }
    }
    let noise = maker.many(spec.noise_vocab, &mut rng);
    let topic_a = if spec.plants { maker.many(spec.topic_words, &mut rng) } else { Vec::new() };

    let reserved: HashSet<&str> = WEEKEND_WORDS
        .iter()
        .chain(&WEEKDAY_WORDS)
        .chain(&ANY_DAY_WORDS)
        .chain([&EVENING_WORD, &SOUTH_WORD])
        .copied()
        .collect();
    let mut food_pool: Vec<&String> = res.food.iter().filter(|w| !reserved.contains(w.as_str())).collect();
    food_pool.sort();
    let food_noise: Vec<String> = food_pool
        .choose_multiple(&mut rng, spec.food_noise_words.min(food_pool.len()))
        .map(|w| w.to_string())
        .collect();

    let zipf = if noise.is_empty() {
        None
    } else {
        Some(WeightedIndex::new((0..noise.len()).map(|r| 1.0 / (r as f64 + 1.0))).expect("positive weights"))
    };
    let south: BTreeSet<String> = locales
        .iter()
        .filter(|l| gaz.region_of(&l.state).ok() == Some(Region::South))
        .map(|l| l.state.clone())
        .collect();

    let span = i64::from(spec.span_days) * 86_400;
    let mut lines: Vec<String> = Vec::new();
    let mut counts = PlantedCounts::default();
    let mut unique: HashSet<String> = HashSet::new();
    let mut next_id = 0u64;

    for loc in &locales {
        let offset = gaz.tz_offset(&loc.timezone).unwrap_or(0);
        let classes: Vec<&Vec<String>> = label_sets
            .iter()
            .filter_map(|s| {
                let label = s.label(&loc.state)?;
                class_markers.get(s.dataset.as_str())?.get(label)
            })
            .collect();
        let n_unmatched = (spec.tweets_per_locale as f64 * spec.unmatched_fraction).round() as usize;
        for k in 0..spec.tweets_per_locale + n_unmatched {
            let matching = k < spec.tweets_per_locale;
            let created_at = spec.start + rng.gen_range(0..span);
            let has_tz = rng.gen_bool(spec.timezone_fraction);
            let topical = spec.plants && !topic_a.is_empty() && rng.gen_bool(spec.topic_fraction);

            let mut words: Vec<String> = Vec::with_capacity(spec.tokens_per_tweet + 4);
            for _ in 0..spec.tokens_per_tweet {
                let w = if rng.gen_bool(spec.marker_rate) {
                    if classes.is_empty() || rng.gen_bool(spec.locale_marker_share) {
                        loc.markers.choose(&mut rng).unwrap().clone()
                    } else {
                        classes.choose(&mut rng).unwrap().choose(&mut rng).unwrap().clone()
                    }
                } else if !food_noise.is_empty() && (zipf.is_none() || rng.gen_bool(spec.food_noise_rate)) {
                    food_noise.choose(&mut rng).unwrap().clone()
                } else {
                    noise[zipf.as_ref().unwrap().sample(&mut rng)].clone()
                };
                words.push(w);
            }
            let mut planted: Vec<&str> = Vec::new();
            if spec.plants {
                if topical {
                    planted.push(topic_a.choose(&mut rng).unwrap());
                }
                if south.contains(&loc.state) && rng.gen_bool(spec.plant_rate) {
                    planted.push(SOUTH_WORD);
                }
                if has_tz {
                    let (hour, weekday) = local_hour_weekday(created_at, offset);
                    let weekend = weekday == 0 || weekday == 6;
                    let day_words: &[&str] = if weekend { &WEEKEND_WORDS } else { &WEEKDAY_WORDS };
                    for w in day_words.iter().chain(&ANY_DAY_WORDS) {
                        if rng.gen_bool(spec.plant_rate) {
                            planted.push(w);
                        }
                    }
                    if hour == EVENING_HOUR && rng.gen_bool(0.5) {
                        planted.push(EVENING_WORD);
                    }
                }
            }
            words.extend(planted.iter().map(|w| w.to_string()));
            let tag = if matching { *DEFAULT_HASHTAGS.choose(&mut rng).unwrap() } else { UNMATCHED_TAG };

            let geo = if topical {
                Some((
                    rng.gen_range(TOPIC_BOX.lat_min + 0.01..TOPIC_BOX.lat_max - 0.01),
                    rng.gen_range(TOPIC_BOX.lon_min + 0.01..TOPIC_BOX.lon_max - 0.01),
                ))
            } else if rng.gen_bool(spec.geo_fraction) {
                Some(random_point_outside(&mut rng, spec.plants.then_some(&TOPIC_BOX)))
            } else {
                None
            };

            let text = format!("{} {tag}", words.join(" "));
            let record = json!({
                "id": format!("syn{next_id:07}"),
                "text": text,
                "created_at": format_created_at(created_at),
                "user": {
                    "location": loc.location,
                    "time_zone": if has_tz { Some(&loc.timezone) } else { None },
                },
                "coordinates": geo.map(|(lat, lon)| json!({"type": "Point", "coordinates": [lon, lat]})),
            });
            next_id += 1;
            lines.push(record.to_string());

            if matching {
                counts.matching_count += 1;
                counts.timezone_count += usize::from(has_tz);
                counts.geo_count += usize::from(geo.is_some());
                counts.token_total += words.len() + 1;
                let distinct: BTreeSet<&str> = planted.iter().copied().collect();
                for w in distinct {
                    *counts.plant_tweets.entry(w.to_string()).or_default() += 1;
                }
                unique.extend(words);
                unique.insert(tag.to_string());
            } else {
                counts.unmatched_count += 1;
            }
        }
    }
    for i in 0..spec.malformed_lines {
        lines.push(format!("{{\"id\": \"bad{i}\", \"text\": "));
    }
    counts.malformed_count = spec.malformed_lines;
    lines.shuffle(&mut rng);
    counts.line_count = lines.len();
    counts.unique_tokens = unique.len();

    let mut expected = BTreeMap::new();
    let n_locales = locales.len() as f64;
    if spec.marker_rate > 0.0 {
        expected.insert(format!("{}_locale_min", spec.level), 0.9);
        expected.insert("state_chars_min".to_string(), 0.9);
    } else {
        expected.insert(format!("{}_locale_baseline", spec.level), 1.0 / n_locales);
        expected.insert("state_chars_baseline".to_string(), 26.0 / 51.0);
    }

    let mut topic_vocabularies = BTreeMap::new();
    if !topic_a.is_empty() {
        topic_vocabularies.insert("A".to_string(), topic_a);
    }
    let manifest = SyntheticManifest {
        spec: spec.clone(),
        seed,
        locales,
        class_markers,
        topic_vocabularies,
        topic_box: spec.plants.then_some(TOPIC_BOX),
        south_states: if spec.plants { south.into_iter().collect() } else { Vec::new() },
        food_noise,
        expected,
        counts,
    };
    Ok(SyntheticCorpus { lines, manifest })
}
