//! Read-only HTTP API and command-line plumbing for the food-tweet
//! analytics toolkit.
//!
//! Every JSON body is canonical: object keys sorted, no insignificant
//! whitespace. A response body therefore equals [`to_canonical_json`] of
//! the matching library call's output.

mod api;
mod error;
mod json;
mod state;

pub use api::{router, serve, RunSummary, MAX_RESPONSE_BYTES};
pub use error::GatewayError;
pub use json::{canonicalize, to_canonical_json};
pub use state::{load_runs_dir, ServiceState};
