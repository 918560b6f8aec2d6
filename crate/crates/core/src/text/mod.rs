//! Tokenization, lexical filtering and vocabulary construction.

mod filter;
mod tokenize;
mod vocab;

pub use filter::{filter_tokens, singleton_set, LocationLexicon};
pub use tokenize::{
    clean_tokens, has_alphanumeric, is_hashtag, is_mention, is_url, normalize_text, tokenize,
};
pub use vocab::{VocabMode, Vocabulary};

/// One tweet's tokens after tokenization and filtering.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TokenizedTweet {
    pub tweet_id: String,
    pub tokens: Vec<String>,
}
