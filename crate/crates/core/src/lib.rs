//! Food-tweet corpus analytics.
//!
//! The pipeline ingests meal-hashtag posts, resolves author locations,
//! builds lexical and LDA topic features, and trains linear SVMs for
//! state-level characteristics and author locale. The analytics module holds the
//! aggregations behind the visualization service.

pub mod analytics;
pub mod corpus;
pub mod data;
pub mod error;
pub mod geonorm;
pub mod learn;
pub mod pipeline;
pub mod tasks;
pub mod text;
pub mod topics;

pub use error::{Error, Result};
