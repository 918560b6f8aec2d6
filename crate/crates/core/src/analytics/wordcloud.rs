use std::collections::{BTreeMap, BTreeSet, HashMap};

use chrono::Weekday;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::index::AnalyticsCorpus;
use crate::error::{Error, Result};

const MIN_FONT: f64 = 10.0;
const FONT_RANGE: f64 = 40.0;
/// Average glyph width relative to font size.
const GLYPH_ASPECT: f64 = 0.6;
const SPIRAL_STEP: f64 = 0.2;
const SPIRAL_GROWTH: f64 = 2.0;
const MAX_SPIRAL_STEPS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorClass {
    Shared,
    GroupA,
    GroupB,
}

/// One placed word; `(x, y)` is the box center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloudWord {
    pub word: String,
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
    pub font_scale: f64,
    pub importance: f64,
    pub color_class: ColorClass,
}

impl CloudWord {
    pub fn overlaps(&self, other: &CloudWord) -> bool {
        (self.x - other.x).abs() * 2.0 < self.width + other.width
            && (self.y - other.y).abs() * 2.0 < self.height + other.height
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CloudLayout {
    pub words: Vec<CloudWord>,
}

impl CloudLayout {
    pub fn get(&self, word: &str) -> Option<&CloudWord> {
        self.words.iter().find(|w| w.word == word)
    }

    /// True when no two boxes overlap.
    pub fn is_disjoint(&self) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, a)| self.words[i + 1..].iter().all(|b| !a.overlaps(b)))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParallelClouds {
    pub a: CloudLayout,
    pub b: CloudLayout,
}

/// Feature tokens of timezone-known tweets: (weekday, weekend).
pub fn split_weekday_weekend(corpus: &AnalyticsCorpus) -> (Vec<Vec<String>>, Vec<Vec<String>>) {
    let mut weekday = Vec::new();
    let mut weekend = Vec::new();
    for doc in corpus.docs() {
        match doc.local.map(|l| l.weekday) {
            Some(Weekday::Sat | Weekday::Sun) => weekend.push(doc.tokens.clone()),
            Some(_) => weekday.push(doc.tokens.clone()),
            None => {}
        }
    }
    (weekday, weekend)
}

struct Group<'a> {
    docs: &'a [Vec<String>],
    /// Top words with importance, best first.
    top: Vec<(String, f64)>,
}

impl<'a> Group<'a> {
    fn new(docs: &'a [Vec<String>], max_words: usize) -> Self {
        let mut counts: HashMap<&str, u64> = HashMap::new();
        for d in docs {
            for t in d {
                *counts.entry(t.as_str()).or_default() += 1;
            }
        }
        let n = docs.len() as f64;
        let mut top: Vec<(String, f64)> = counts.into_iter().map(|(w, c)| (w.to_string(), c as f64 / n)).collect();
        top.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        top.truncate(max_words);
        Group { docs, top }
    }

    fn importance(&self, word: &str) -> f64 {
        self.top.iter().find(|(w, _)| w == word).map_or(0.0, |(_, i)| *i)
    }

    fn max_importance(&self) -> f64 {
        self.top.first().map_or(1.0, |(_, i)| *i)
    }

    fn scale(&self, word: &str) -> f64 {
        (self.importance(word) / self.max_importance()).sqrt()
    }

    /// Tweets containing both words, for every pair of top words.
    fn cooccurrence(&self) -> HashMap<(String, String), u64> {
        let top: BTreeSet<&str> = self.top.iter().map(|(w, _)| w.as_str()).collect();
        let mut out: HashMap<(String, String), u64> = HashMap::new();
        for d in self.docs {
            let present: BTreeSet<&str> = d.iter().map(String::as_str).filter(|t| top.contains(t)).collect();
            for &a in &present {
                for &b in &present {
                    if a != b {
                        *out.entry((a.to_string(), b.to_string())).or_default() += 1;
                    }
                }
            }
        }
        out
    }
}

fn sized(word: &str, font_scale: f64, importance: f64, color_class: ColorClass) -> CloudWord {
    let height = MIN_FONT + FONT_RANGE * font_scale;
    CloudWord {
        word: word.to_string(),
        x: 0.0,
        y: 0.0,
        width: height * GLYPH_ASPECT * word.chars().count().max(1) as f64,
        height,
        font_scale,
        importance,
        color_class,
    }
}

/// Walks an Archimedean spiral out from `(cx, cy)` until `word` fits.
fn place(mut word: CloudWord, cx: f64, cy: f64, phase: f64, placed: &[CloudWord]) -> CloudWord {
    for i in 0..MAX_SPIRAL_STEPS {
        let theta = i as f64 * SPIRAL_STEP;
        let r = SPIRAL_GROWTH * theta;
        word.x = cx + r * (theta + phase).cos();
        word.y = cy + r * (theta + phase).sin();
        if placed.iter().all(|p| !p.overlaps(&word)) {
            return word;
        }
    }
    unreachable!("spiral radius grows without bound")
}

fn place_specific(
    group: &Group<'_>,
    shared: &BTreeSet<String>,
    color: ColorClass,
    phase: f64,
    mut layout: Vec<CloudWord>,
) -> Vec<CloudWord> {
    let co = group.cooccurrence();
    for (word, importance) in group.top.iter().filter(|(w, _)| !shared.contains(w)) {
        let anchor = layout
            .iter()
            .enumerate()
            .map(|(i, p)| (co.get(&(word.clone(), p.word.clone())).copied().unwrap_or(0), i))
            .filter(|(c, _)| *c > 0)
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
            .map(|(_, i)| (layout[i].x, layout[i].y))
            .unwrap_or((0.0, 0.0));
        let w = sized(word, group.scale(word), *importance, color);
        let w = place(w, anchor.0, anchor.1, phase, &layout);
        layout.push(w);
    }
    layout
}

/// Builds two clouds where words in both groups' top lists share exact
/// positions. Group-specific words are then placed next to the already
/// placed word they co-occur with most.
pub fn parallel_wordclouds(
    group_a: &[Vec<String>],
    group_b: &[Vec<String>],
    max_words: usize,
    seed: u64,
) -> Result<ParallelClouds> {
    if max_words < 1 {
        return Err(Error::invalid("max_words must be at least 1"));
    }
    if group_a.is_empty() || group_b.is_empty() {
        return Err(Error::EmptyGroup);
    }
    let phase = ChaCha8Rng::seed_from_u64(seed).gen_range(0.0..std::f64::consts::TAU);
    let a = Group::new(group_a, max_words);
    let b = Group::new(group_b, max_words);

    let b_words: BTreeSet<&str> = b.top.iter().map(|(w, _)| w.as_str()).collect();
    let mut shared_order: Vec<(&str, f64)> = a
        .top
        .iter()
        .filter(|(w, _)| b_words.contains(w.as_str()))
        .map(|(w, ia)| (w.as_str(), ia + b.importance(w)))
        .collect();
    shared_order.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(y.0)));
    let shared: BTreeSet<String> = shared_order.iter().map(|(w, _)| w.to_string()).collect();

    let mut common: Vec<CloudWord> = Vec::with_capacity(shared.len());
    for (word, total) in &shared_order {
        let scale = (a.scale(word) + b.scale(word)) / 2.0;
        let w = sized(word, scale, total / 2.0, ColorClass::Shared);
        let w = place(w, 0.0, 0.0, phase, &common);
        common.push(w);
    }
    let with_importance = |g: &Group<'_>| -> Vec<CloudWord> {
        common
            .iter()
            .map(|w| CloudWord {
                importance: g.importance(&w.word),
                ..w.clone()
            })
            .collect()
    };
    let la = place_specific(&a, &shared, ColorClass::GroupA, phase, with_importance(&a));
    let lb = place_specific(&b, &shared, ColorClass::GroupB, phase, with_importance(&b));
    Ok(ParallelClouds {
        a: CloudLayout { words: la },
        b: CloudLayout { words: lb },
    })
}

/// Word -> (x, y) of shared words, for comparing two layouts.
pub fn shared_positions(layout: &CloudLayout) -> BTreeMap<&str, (f64, f64)> {
    layout
        .words
        .iter()
        .filter(|w| w.color_class == ColorClass::Shared)
        .map(|w| (w.word.as_str(), (w.x, w.y)))
        .collect()
}
