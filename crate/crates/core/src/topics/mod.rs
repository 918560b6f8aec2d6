//! LDA topic model trained by collapsed Gibbs sampling, with fold-in
//! inference of each tweet's dominant topic.

mod io;
mod lda;

pub use io::{TopicSidecar, TopicSummary, WordCount};
pub use lda::{infer_all, infer_top_topic, top_words, train_lda, LdaParams, LdaSampler, TopicModel};

/// Default number of fold-in sweeps for [`infer_top_topic`].
pub const DEFAULT_FOLD_IN_ITERATIONS: usize = 20;
