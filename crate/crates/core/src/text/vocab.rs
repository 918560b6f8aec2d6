use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

use super::tokenize::is_hashtag;

/// Which tokens count as features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VocabMode {
    AllWords,
    Hashtags,
    Food,
    FoodPlusHashtags,
}

impl VocabMode {
    pub const ALL: [VocabMode; 4] = [
        VocabMode::AllWords,
        VocabMode::Hashtags,
        VocabMode::Food,
        VocabMode::FoodPlusHashtags,
    ];

    /// Whether `token` survives this mode's selection.
    pub fn admits(self, token: &str, food: &HashSet<String>) -> bool {
        match self {
            VocabMode::AllWords => true,
            VocabMode::Hashtags => is_hashtag(token),
            VocabMode::Food => food.contains(token),
            VocabMode::FoodPlusHashtags => is_hashtag(token) || food.contains(token),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VocabMode::AllWords => "all_words",
            VocabMode::Hashtags => "hashtags",
            VocabMode::Food => "food",
            VocabMode::FoodPlusHashtags => "food_hashtags",
        }
    }
}

impl fmt::Display for VocabMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VocabMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "all_words" | "all" | "allwords" => Ok(VocabMode::AllWords),
            "hashtags" => Ok(VocabMode::Hashtags),
            "food" => Ok(VocabMode::Food),
            "food_hashtags" | "food_plus_hashtags" | "foodplushashtags" => {
                Ok(VocabMode::FoodPlusHashtags)
            }
            other => Err(Error::invalid(format!("unknown vocabulary mode {other:?}"))),
        }
    }
}

/// Dense token <-> feature-id mapping; ids follow lexicographic token order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "RawVocabulary")]
pub struct Vocabulary {
    mode: VocabMode,
    tokens: Vec<String>,
    #[serde(skip)]
    id_of: HashMap<String, usize>,
}

impl Vocabulary {
    /// Builds a vocabulary from already filtered token lists.
    pub fn build<'a, I>(docs: I, mode: VocabMode, food: &HashSet<String>) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [String]>,
    {
        let mut selected = BTreeSet::new();
        for doc in docs {
            for t in doc {
                if mode.admits(t, food) {
                    selected.insert(t.as_str());
                }
            }
        }
        if selected.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        Ok(Self::from_sorted(mode, selected.into_iter().map(str::to_string).collect()))
    }

    /// Rebuilds from a token list (sorted and deduplicated here).
    pub fn from_tokens(mode: VocabMode, mut tokens: Vec<String>) -> Result<Self> {
        tokens.sort();
        tokens.dedup();
        if tokens.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        Ok(Self::from_sorted(mode, tokens))
    }

    fn from_sorted(mode: VocabMode, tokens: Vec<String>) -> Self {
        let id_of = tokens.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Vocabulary { mode, tokens, id_of }
    }

    pub fn mode(&self) -> VocabMode {
        self.mode
    }

    pub fn id(&self, token: &str) -> Option<usize> {
        self.id_of.get(token).copied()
    }

    pub fn token(&self, id: usize) -> Option<&str> {
        self.tokens.get(id).map(String::as_str)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Maps a token list to ids, dropping out-of-vocabulary tokens.
    pub fn encode(&self, tokens: &[String]) -> Vec<u32> {
        tokens.iter().filter_map(|t| self.id(t)).map(|i| i as u32).collect()
    }

    /// Hex SHA-256 over mode and tokens.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.mode.as_str().as_bytes());
        for t in &self.tokens {
            h.update([0u8]);
            h.update(t.as_bytes());
        }
        hex::encode(h.finalize())
    }

}

#[derive(Deserialize)]
struct RawVocabulary {
    mode: VocabMode,
    tokens: Vec<String>,
}

impl From<RawVocabulary> for Vocabulary {
    fn from(raw: RawVocabulary) -> Self {
        Vocabulary::from_sorted(raw.mode, raw.tokens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn docs() -> Vec<Vec<String>> {
        vec![vec!["pizza".into(), "#dinner".into(), "great".into()]]
    }

    fn food() -> HashSet<String> {
        ["pizza".to_string()].into_iter().collect()
    }

    fn build(mode: VocabMode) -> Result<Vocabulary> {
        let d = docs();
        Vocabulary::build(d.iter().map(Vec::as_slice), mode, &food())
    }

    #[test]
    fn hashtags_mode() {
        assert_eq!(build(VocabMode::Hashtags).unwrap().tokens(), ["#dinner"]);
    }

    #[test]
    fn food_mode() {
        assert_eq!(build(VocabMode::Food).unwrap().tokens(), ["pizza"]);
    }

    #[test]
    fn food_plus_hashtags_mode() {
        assert_eq!(build(VocabMode::FoodPlusHashtags).unwrap().tokens(), ["#dinner", "pizza"]);
    }

    #[test]
    fn ids_contiguous_and_lexicographic() {
        let v = build(VocabMode::AllWords).unwrap();
        assert_eq!(v.tokens(), ["#dinner", "great", "pizza"]);
        for (i, t) in v.tokens().iter().enumerate() {
            assert_eq!(v.id(t), Some(i));
        }
        assert_eq!(v, build(VocabMode::AllWords).unwrap());
    }

    #[test]
    fn empty_vocabulary_error() {
        let d: Vec<Vec<String>> = vec![vec!["great".into()]];
        let err = Vocabulary::build(d.iter().map(Vec::as_slice), VocabMode::Food, &food());
        assert!(matches!(err, Err(Error::EmptyVocabulary)));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("all_words".parse::<VocabMode>().unwrap(), VocabMode::AllWords);
        assert_eq!("food-hashtags".parse::<VocabMode>().unwrap(), VocabMode::FoodPlusHashtags);
        assert!("nope".parse::<VocabMode>().is_err());
    }
}
