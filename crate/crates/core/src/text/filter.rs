use std::collections::{HashMap, HashSet};

use super::tokenize::{has_alphanumeric, is_mention, is_url};

/// Place names, abbreviations and nicknames that must never reach a
/// feature vector, together with their hashtag forms.
///
/// Multi-word names are matched as consecutive token runs; the hashtag
/// form of a multi-word name is its words concatenated (`#newyorkcity`).
#[derive(Debug, Clone, Default)]
pub struct LocationLexicon {
    single: HashSet<String>,
    /// first word -> remaining words of each multi-word phrase, longest first
    phrases: HashMap<String, Vec<Vec<String>>>,
}

impl LocationLexicon {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut lex = LocationLexicon::default();
        for name in names {
            lex.insert(name.as_ref());
        }
        lex
    }

    pub fn insert(&mut self, name: &str) {
        let words: Vec<String> = name
            .to_lowercase()
            .split(|c: char| !c.is_alphanumeric() && c != '\'')
            .filter(|w| !w.is_empty())
            .map(str::to_string)
            .collect();
        match words.len() {
            0 => {}
            1 => {
                self.single.insert(words[0].clone());
            }
            _ => {
                self.single.insert(words.concat());
                let rest = words[1..].to_vec();
                let entry = self.phrases.entry(words[0].clone()).or_default();
                if !entry.contains(&rest) {
                    entry.push(rest);
                    entry.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
                }
            }
        }
    }

    /// True when `token` (or its hashtag-stripped form) names a location.
    pub fn contains_token(&self, token: &str) -> bool {
        let bare = token.strip_prefix('#').unwrap_or(token);
        self.single.contains(bare)
    }

    pub fn len(&self) -> usize {
        self.single.len()
    }

    pub fn is_empty(&self) -> bool {
        self.single.is_empty()
    }

    /// Length of the longest multi-word phrase starting at `tokens[0]`.
    fn phrase_len_at(&self, tokens: &[String]) -> usize {
        let Some(rests) = self.phrases.get(&tokens[0]) else {
            return 0;
        };
        for rest in rests {
            if tokens.len() > rest.len() && tokens[1..=rest.len()] == rest[..] {
                return rest.len() + 1;
            }
        }
        0
    }
}

/// Tokens occurring exactly once across `docs`.
pub fn singleton_set<'a, I>(docs: I) -> HashSet<String>
where
    I: IntoIterator<Item = &'a Vec<String>>,
{
    let mut counts: HashMap<&str, u32> = HashMap::new();
    for doc in docs {
        for t in doc {
            *counts.entry(t.as_str()).or_insert(0) += 1;
        }
    }
    counts
        .into_iter()
        .filter(|&(_, c)| c == 1)
        .map(|(t, _)| t.to_string())
        .collect()
}

/// Removes noise, stopwords, singletons, URLs, mentions and location words.
pub fn filter_tokens(
    tokens: &[String],
    locations: &LocationLexicon,
    stopwords: &HashSet<String>,
    singletons: &HashSet<String>,
) -> Vec<String> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        let phrase = locations.phrase_len_at(&tokens[i..]);
        if phrase > 0 {
            i += phrase;
            continue;
        }
        let t = &tokens[i];
        i += 1;
        if !has_alphanumeric(t)
            || is_url(t)
            || is_mention(t)
            || stopwords.contains(t)
            || singletons.contains(t)
            || locations.contains_token(t)
        {
            continue;
        }
        out.push(t.clone());
    }
    out
}
