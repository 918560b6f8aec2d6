use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::index::{contains_phrase, phrase_tokens, AnalyticsCorpus};
use crate::error::{Error, Result};
use crate::topics::{infer_all, TopicModel};

/// Cell sizes in degrees accepted by [`heatmap_bins`].
pub const ALLOWED_CELLS: [f64; 4] = [0.1, 0.25, 0.5, 1.0];

/// Guards against `40.7 / 0.1 = 406.999...` style rounding.
const INDEX_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeatmapQuery {
    Phrase(String),
    Topic(usize),
}

/// Top topic of every tweet in an [`AnalyticsCorpus`], in corpus order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopicAssignments {
    pub topics: usize,
    pub of: Vec<usize>,
}

impl TopicAssignments {
    pub fn infer(model: &TopicModel, corpus: &AnalyticsCorpus, fold_in_iterations: usize, seed: u64) -> Self {
        let docs: Vec<Vec<String>> = corpus.docs().iter().map(|d| d.tokens.clone()).collect();
        TopicAssignments {
            topics: model.topics(),
            of: infer_all(model, &docs, fold_in_iterations, seed),
        }
    }
}

/// Sparse grid of tweet counts; `rows` holds `[lat_idx, lon_idx, count]`
/// sorted by cell, where a cell covers `[idx * cell, (idx + 1) * cell)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeoGrid {
    pub cell: f64,
    pub query: HeatmapQuery,
    pub rows: Vec<(i64, i64, u64)>,
    pub total: u64,
}

impl GeoGrid {
    pub fn count(&self, lat_idx: i64, lon_idx: i64) -> u64 {
        self.rows
            .iter()
            .find(|r| r.0 == lat_idx && r.1 == lon_idx)
            .map_or(0, |r| r.2)
    }
}

pub fn cell_index(coord: f64, cell: f64) -> i64 {
    (coord / cell + INDEX_EPS).floor() as i64
}

/// Bins geotagged tweets matching `query` into square cells.
pub fn heatmap_bins(
    corpus: &AnalyticsCorpus,
    query: &HeatmapQuery,
    cell: f64,
    topics: Option<&TopicAssignments>,
) -> Result<GeoGrid> {
    if !ALLOWED_CELLS.contains(&cell) {
        return Err(Error::invalid(format!("cell size {cell} not in {ALLOWED_CELLS:?}")));
    }
    let matcher: Box<dyn Fn(usize) -> bool + '_> = match query {
        HeatmapQuery::Phrase(p) => {
            let needle = phrase_tokens(p)?;
            Box::new(move |i| contains_phrase(&corpus.docs()[i].clean, &needle))
        }
        HeatmapQuery::Topic(t) => {
            let a = topics.ok_or_else(|| Error::invalid("topic queries need a topic model"))?;
            if *t >= a.topics {
                return Err(Error::TopicOutOfRange {
                    topic: *t,
                    topics: a.topics,
                });
            }
            if a.of.len() != corpus.len() {
                return Err(Error::LengthMismatch(format!(
                    "{} topic assignments for {} tweets",
                    a.of.len(),
                    corpus.len()
                )));
            }
            Box::new(move |i| a.of[i] == *t)
        }
    };
    let mut cells: BTreeMap<(i64, i64), u64> = BTreeMap::new();
    for (i, doc) in corpus.docs().iter().enumerate() {
        let Some(g) = doc.geo else { continue };
        if matcher(i) {
            *cells.entry((cell_index(g.lat, cell), cell_index(g.lon, cell))).or_default() += 1;
        }
    }
    let rows: Vec<(i64, i64, u64)> = cells.into_iter().map(|((a, b), c)| (a, b, c)).collect();
    Ok(GeoGrid {
        cell,
        query: match query {
            HeatmapQuery::Phrase(p) => HeatmapQuery::Phrase(phrase_tokens(p)?.join(" ")),
            q => q.clone(),
        },
        total: rows.iter().map(|r| r.2).sum(),
        rows,
    })
}
