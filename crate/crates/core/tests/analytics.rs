use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::Cursor;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use t4f_core::analytics::{
    heatmap_bins, parallel_wordclouds, rank_terms_tfidf, shared_positions, split_weekday_weekend, temporal_histogram,
    AnalyticsCorpus, ColorClass, Granularity, HeatmapQuery,
};
use t4f_core::corpus::{ingest_reader, FieldMapping, HashtagFilter};
use t4f_core::pipeline::Resources;
use t4f_core::tasks::{generate_synthetic_corpus, SyntheticManifest, SyntheticSpec, TOPIC_BOX};
use t4f_core::text::VocabMode;

fn build(spec: &SyntheticSpec, seed: u64, res: &Resources) -> (AnalyticsCorpus, SyntheticManifest) {
    let corpus = generate_synthetic_corpus(spec, seed, res).unwrap();
    let snap = ingest_reader(
        Cursor::new(corpus.lines.join("\n")),
        "synthetic",
        &HashtagFilter::default(),
        &FieldMapping::default(),
    )
    .unwrap();
    (AnalyticsCorpus::build(&snap, res), corpus.manifest)
}

fn planted() -> (Resources, AnalyticsCorpus, SyntheticManifest) {
    let res = Resources::embedded().unwrap();
    let spec = SyntheticSpec {
        tweets_per_locale: 200,
        ..SyntheticSpec::default()
    };
    let (c, m) = build(&spec, 21, &res);
    (res, c, m)
}

/// Recounts every state/term pair from scratch.
fn naive_top_terms(corpus: &AnalyticsCorpus, mode: VocabMode, food: &HashSet<String>) -> BTreeMap<String, (String, f64)> {
    let states: BTreeSet<&str> = corpus.docs().iter().filter_map(|d| d.state.as_deref()).collect();
    let terms: BTreeSet<&str> = corpus
        .docs()
        .iter()
        .flat_map(|d| d.tokens.iter())
        .filter(|t| mode.admits(t, food))
        .map(String::as_str)
        .collect();
    let tf = |state: &str, term: &str| -> usize {
        corpus
            .docs()
            .iter()
            .filter(|d| d.state.as_deref() == Some(state))
            .map(|d| d.tokens.iter().filter(|t| t.as_str() == term).count())
            .sum()
    };
    let mut table: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for &s in &states {
        for &t in &terms {
            let n = tf(s, t);
            if n > 0 {
                table.insert((s, t), n);
            }
        }
    }
    let mut best: BTreeMap<String, (String, f64)> = BTreeMap::new();
    for &s in &states {
        for &t in &terms {
            let Some(&n) = table.get(&(s, t)) else { continue };
            let df = states.iter().filter(|&&o| table.contains_key(&(o, t))).count();
            let score = n as f64 * (51.0 / df as f64).ln();
            let better = match best.get(s) {
                None => true,
                Some((bt, bs)) => score > *bs || (score == *bs && t < bt.as_str()),
            };
            if better {
                best.insert(s.to_string(), (t.to_string(), score));
            }
        }
    }
    best
}

#[test]
fn tfidf_matches_naive_recount() {
    let res = Resources::embedded().unwrap();
    for (seed, mode) in [(1, VocabMode::Food), (2, VocabMode::AllWords), (3, VocabMode::FoodPlusHashtags)] {
        let spec = SyntheticSpec {
            tweets_per_locale: 19,
            ..SyntheticSpec::default()
        };
        let (corpus, _) = build(&spec, seed, &res);
        assert!(corpus.len() <= 1000);
        let fast: BTreeMap<String, (String, f64)> = rank_terms_tfidf(&corpus, mode, &res.food)
            .into_iter()
            .map(|(s, t)| (s, (t.term, t.score)))
            .collect();
        assert_eq!(fast, naive_top_terms(&corpus, mode, &res.food), "{mode}");
    }
}

#[test]
fn histogram_and_heatmap_conserve_counts() {
    let (_, corpus, _) = planted();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let docs = corpus.docs();
    for i in 0..100 {
        let phrase = if i % 10 == 9 {
            "no such phrase".to_string()
        } else {
            let d = &docs[rng.gen_range(0..docs.len())].clean;
            let start = rng.gen_range(0..d.len());
            let len = rng.gen_range(1..=2).min(d.len() - start);
            d[start..start + len].join(" ")
        };
        let padded = format!(" {phrase} ");
        let matches = |d: &&t4f_core::analytics::AnalyticsDoc| format!(" {} ", d.clean.join(" ")).contains(&padded);
        let tz_matches = docs.iter().filter(|d| d.local.is_some()).filter(matches).count() as u64;
        let geo_matches = docs.iter().filter(|d| d.geo.is_some()).filter(matches).count() as u64;
        for g in [Granularity::Hour, Granularity::Weekday, Granularity::Month] {
            let h = temporal_histogram(&corpus, &phrase, g).unwrap();
            assert_eq!(h.bins.len(), g.bins());
            assert_eq!(h.bins.iter().sum::<u64>(), tz_matches, "{phrase}");
            assert_eq!(h.total, tz_matches);
        }
        for cell in [0.1, 0.25, 0.5, 1.0] {
            let grid = heatmap_bins(&corpus, &HeatmapQuery::Phrase(phrase.clone()), cell, None).unwrap();
            assert_eq!(grid.rows.iter().map(|r| r.2).sum::<u64>(), geo_matches, "{phrase}");
            assert!(grid.rows.iter().all(|r| r.2 >= 1));
        }
    }
}

#[test]
fn grits_wins_the_south() {
    let (res, corpus, manifest) = planted();
    let top = rank_terms_tfidf(&corpus, VocabMode::Food, &res.food);
    assert_eq!(top.len(), 51);
    assert_eq!(manifest.south_states.len(), 17);
    for (state, t) in &top {
        if manifest.south_states.contains(state) {
            assert_eq!(t.term, "grits", "{state}");
        } else {
            assert_ne!(t.term, "grits", "{state}");
        }
    }
}

#[test]
fn temporal_plants() {
    let (_, corpus, _) = planted();
    let brunch = temporal_histogram(&corpus, "brunch", Granularity::Weekday).unwrap();
    assert!(brunch.bins[..5].iter().all(|&c| c == 0), "{:?}", brunch.bins);
    assert!(brunch.bins[5] > 0 && brunch.bins[6] > 0);
    let work = temporal_histogram(&corpus, "work", Granularity::Weekday).unwrap();
    assert!(work.bins[5] == 0 && work.bins[6] == 0);
    let wine = temporal_histogram(&corpus, "wine", Granularity::Hour).unwrap();
    assert!(wine.total > 0);
    assert_eq!(wine.bins[20], wine.total);
}

#[test]
fn topic_words_stay_in_the_box() {
    let (_, corpus, manifest) = planted();
    let words = &manifest.topic_vocabularies["A"];
    for cell in [0.1, 0.25, 0.5, 1.0] {
        for w in words {
            let grid = heatmap_bins(&corpus, &HeatmapQuery::Phrase(w.clone()), cell, None).unwrap();
            assert!(grid.total > 0);
            for &(la, lo, _) in &grid.rows {
                let (lat, lon) = (la as f64 * cell, lo as f64 * cell);
                assert!(TOPIC_BOX.contains(lat + cell / 2.0, lon + cell / 2.0), "{w} {la} {lo} @ {cell}");
            }
        }
    }
}

#[test]
fn weekday_weekend_clouds() {
    let (_, corpus, _) = planted();
    let (weekday, weekend) = split_weekday_weekend(&corpus);
    let clouds = parallel_wordclouds(&weekday, &weekend, 50, 3).unwrap();
    assert!(clouds.a.is_disjoint() && clouds.b.is_disjoint());
    let dinner_a = clouds.a.get("dinner").unwrap();
    assert_eq!(dinner_a.color_class, ColorClass::Shared);
    let dinner_b = clouds.b.get("dinner").unwrap();
    assert_eq!((dinner_a.x, dinner_a.y), (dinner_b.x, dinner_b.y));
    assert_eq!(clouds.a.get("work").unwrap().color_class, ColorClass::GroupA);
    assert!(clouds.b.get("work").is_none());
    assert_eq!(clouds.b.get("family").unwrap().color_class, ColorClass::GroupB);
    assert!(clouds.a.get("family").is_none());
    assert_eq!(shared_positions(&clouds.a), shared_positions(&clouds.b));
}
