use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::LocationLexicon;

/// US Census Bureau region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Region {
    Midwest,
    Northeast,
    South,
    West,
}

impl Region {
    pub const ALL: [Region; 4] = [Region::Midwest, Region::Northeast, Region::South, Region::West];

    pub fn as_str(self) -> &'static str {
        match self {
            Region::Midwest => "Midwest",
            Region::Northeast => "Northeast",
            Region::South => "South",
            Region::West => "West",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "midwest" => Ok(Region::Midwest),
            "northeast" => Ok(Region::Northeast),
            "south" => Ok(Region::South),
            "west" => Ok(Region::West),
            other => Err(Error::invalid(format!("unknown region {other:?}"))),
        }
    }
}

/// A resolved author location.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormalizedLocation {
    pub state: String,
    pub city: Option<String>,
    pub region: Region,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CityEntry {
    pub name: String,
    pub state: String,
    pub tz_offset: Option<i32>,
}

/// Meaning of one gazetteer phrase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum PhraseMeaning {
    State(String),
    /// Indices into `Gazetteer::cities`.
    City(Vec<usize>),
    /// Both a state name/abbreviation and a city name/nickname; resolved by
    /// timezone.
    Ambiguous { state: String, cities: Vec<usize> },
}

/// Place-name tables used by [`normalize_location`](super::normalize_location).
#[derive(Debug, Clone)]
pub struct Gazetteer {
    /// USPS code -> display name (first name listed for the code).
    state_display: BTreeMap<String, String>,
    state_regions: BTreeMap<String, Region>,
    /// Dominant timezone offset of each state, from its cities' hints.
    state_tz: BTreeMap<String, i32>,
    cities: Vec<CityEntry>,
    /// Lowercase word sequence -> meaning.
    phrases: HashMap<Vec<String>, PhraseMeaning>,
    max_phrase_words: usize,
    tz_offsets: BTreeMap<String, i32>,
}

pub(crate) fn phrase_words(s: &str) -> Vec<String> {
    s.to_lowercase()
        .split(|c: char| !c.is_alphanumeric() && c != '\'')
        .filter(|w| !w.is_empty())
        .map(str::to_string)
        .collect()
}

fn csv_reader(data: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(data.as_bytes())
}

fn data_err(name: &str, reason: impl Into<String>) -> Error {
    Error::DataFile {
        name: name.to_string(),
        reason: reason.into(),
    }
}

impl Gazetteer {
    /// Parses the four CSV tables (`states.csv`, `cities.csv`, `regions.csv`,
    /// `timezones.csv` contents).
    pub fn from_csv(states: &str, cities: &str, regions: &str, timezones: &str) -> Result<Self> {
        let mut tz_offsets = BTreeMap::new();
        for rec in csv_reader(timezones).records() {
            let rec = rec.map_err(|e| data_err("timezones.csv", e.to_string()))?;
            let name = rec.get(0).unwrap_or_default().to_string();
            let offset: i32 = rec
                .get(1)
                .unwrap_or_default()
                .parse()
                .map_err(|_| data_err("timezones.csv", format!("bad offset for {name:?}")))?;
            if !(-720..=840).contains(&offset) {
                return Err(data_err("timezones.csv", format!("offset {offset} out of range")));
            }
            tz_offsets.insert(name, offset);
        }

        let mut state_names = BTreeMap::new();
        let mut state_display = BTreeMap::new();
        for rec in csv_reader(states).records() {
            let rec = rec.map_err(|e| data_err("states.csv", e.to_string()))?;
            let name = rec.get(0).unwrap_or_default();
            let code = rec.get(1).unwrap_or_default().to_ascii_uppercase();
            if code.len() != 2 {
                return Err(data_err("states.csv", format!("bad code {code:?}")));
            }
            state_display.entry(code.clone()).or_insert_with(|| name.to_string());
            state_names.insert(phrase_words(name).join(" "), code.clone());
            state_names.insert(code.to_lowercase(), code);
        }

        let mut state_regions = BTreeMap::new();
        for rec in csv_reader(regions).records() {
            let rec = rec.map_err(|e| data_err("regions.csv", e.to_string()))?;
            let code = rec.get(0).unwrap_or_default().to_ascii_uppercase();
            let region: Region = rec
                .get(1)
                .unwrap_or_default()
                .parse()
                .map_err(|e: Error| data_err("regions.csv", e.to_string()))?;
            state_regions.insert(code, region);
        }
        for code in state_display.keys() {
            if !state_regions.contains_key(code) {
                return Err(data_err("regions.csv", format!("state {code} has no region")));
            }
        }

        let mut city_list = Vec::new();
        let mut city_phrases: BTreeMap<Vec<String>, BTreeSet<usize>> = BTreeMap::new();
        for rec in csv_reader(cities).records() {
            let rec = rec.map_err(|e| data_err("cities.csv", e.to_string()))?;
            let name = rec.get(0).unwrap_or_default().to_string();
            let nicknames = rec.get(1).unwrap_or_default();
            let state = rec.get(2).unwrap_or_default().to_ascii_uppercase();
            let tz_hint = rec.get(3).unwrap_or_default();
            if !state_display.contains_key(&state) {
                return Err(data_err("cities.csv", format!("{name}: unknown state {state:?}")));
            }
            let tz_offset = if tz_hint.is_empty() {
                None
            } else {
                Some(*tz_offsets.get(tz_hint).ok_or_else(|| {
                    data_err("cities.csv", format!("{name}: unknown tz_hint {tz_hint:?}"))
                })?)
            };
            let idx = city_list.len();
            city_list.push(CityEntry {
                name: name.clone(),
                state,
                tz_offset,
            });
            for alias in std::iter::once(name.as_str()).chain(nicknames.split('|')) {
                let words = phrase_words(alias);
                if !words.is_empty() {
                    city_phrases.entry(words).or_default().insert(idx);
                }
            }
        }

        let mut state_tz = BTreeMap::new();
        for code in state_display.keys() {
            let mut votes: BTreeMap<i32, usize> = BTreeMap::new();
            for c in city_list.iter().filter(|c| &c.state == code) {
                if let Some(off) = c.tz_offset {
                    *votes.entry(off).or_default() += 1;
                }
            }
            if let Some((&off, _)) = votes.iter().max_by_key(|(off, n)| (**n, -**off)) {
                state_tz.insert(code.clone(), off);
            }
        }

        let mut phrases: HashMap<Vec<String>, PhraseMeaning> = HashMap::new();
        for (name, code) in &state_names {
            phrases.insert(phrase_words(name), PhraseMeaning::State(code.clone()));
        }
        for (words, idxs) in city_phrases {
            let idxs: Vec<usize> = idxs.into_iter().collect();
            let meaning = match phrases.remove(&words) {
                Some(PhraseMeaning::State(state)) => PhraseMeaning::Ambiguous { state, cities: idxs },
                _ => PhraseMeaning::City(idxs),
            };
            phrases.insert(words, meaning);
        }
        let max_phrase_words = phrases.keys().map(Vec::len).max().unwrap_or(1);

        Ok(Gazetteer {
            state_display,
            state_regions,
            state_tz,
            cities: city_list,
            phrases,
            max_phrase_words,
            tz_offsets,
        })
    }

    /// The 51 USPS codes in sorted order.
    pub fn state_codes(&self) -> impl Iterator<Item = &str> {
        self.state_display.keys().map(String::as_str)
    }

    pub fn state_name(&self, code: &str) -> Option<&str> {
        self.state_display.get(code).map(String::as_str)
    }

    pub fn is_state(&self, code: &str) -> bool {
        self.state_display.contains_key(code)
    }

    pub fn region_of(&self, code: &str) -> Result<Region> {
        self.state_regions
            .get(&code.to_ascii_uppercase())
            .copied()
            .ok_or_else(|| Error::UnknownState(code.to_string()))
    }

    pub fn tz_offset(&self, timezone: &str) -> Option<i32> {
        self.tz_offsets.get(timezone.trim()).copied()
    }

    pub fn timezones(&self) -> &BTreeMap<String, i32> {
        &self.tz_offsets
    }

    /// Dominant UTC offset of a state's listed cities.
    pub fn state_tz_offset(&self, code: &str) -> Option<i32> {
        self.state_tz.get(code).copied()
    }

    pub fn cities(&self) -> &[CityEntry] {
        &self.cities
    }

    /// Every state name, abbreviation, city name and nickname, for
    /// removal from tweet text.
    pub fn location_lexicon(&self) -> LocationLexicon {
        LocationLexicon::new(self.phrases.keys().map(|w| w.join(" ")))
    }

    /// Tokens that are simultaneously a state name/abbreviation and a city
    /// name/nickname.
    pub fn ambiguous_tokens(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .phrases
            .iter()
            .filter(|(_, m)| matches!(m, PhraseMeaning::Ambiguous { .. }))
            .map(|(w, _)| w.join(" "))
            .collect();
        out.sort();
        out
    }

    pub(crate) fn phrase(&self, words: &[String]) -> Option<&PhraseMeaning> {
        self.phrases.get(words)
    }

    pub(crate) fn max_phrase_words(&self) -> usize {
        self.max_phrase_words
    }

    pub(crate) fn city(&self, idx: usize) -> &CityEntry {
        &self.cities[idx]
    }
}
