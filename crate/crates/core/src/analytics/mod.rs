//! Aggregations behind the visualization service: per-state tf-idf top
//! terms, temporal histograms, geotag heatmaps and parallel word clouds.
//!
//! All queries run over an [`AnalyticsCorpus`], a read-only per-tweet index
//! built once from a snapshot.

mod heatmap;
mod histogram;
mod index;
mod tfidf;
mod wordcloud;

pub use heatmap::{cell_index, heatmap_bins, GeoGrid, HeatmapQuery, TopicAssignments, ALLOWED_CELLS};
pub use histogram::{temporal_histogram, Granularity, HistogramBins};
pub use index::{AnalyticsCorpus, AnalyticsDoc};
pub use tfidf::{rank_terms_tfidf, term_scores, TermScore, STATE_DOCUMENTS};
pub use wordcloud::{parallel_wordclouds, shared_positions, split_weekday_weekend, CloudLayout, CloudWord, ColorClass, ParallelClouds};
