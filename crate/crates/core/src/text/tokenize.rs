//! Rule-based tweet tokenizer.
//!
//! Whitespace separates chunks. Inside a chunk, URLs are kept whole,
//! `@user` and `#tag` become single tokens, and the rest splits into
//! alphanumeric words (internal `'` and `-` are kept, so `don't` and
//! `mac-n-cheese` survive). Pure punctuation never produces a token.

use unicode_normalization::UnicodeNormalization;

/// NFC-normalizes and lowercases `text`.
pub fn normalize_text(text: &str) -> String {
    text.nfc().collect::<String>().to_lowercase()
}

pub fn tokenize(text: &str) -> Vec<String> {
    let normalized = normalize_text(text);
    let mut out = Vec::new();
    for chunk in normalized.split_whitespace() {
        tokenize_chunk(chunk, &mut out);
    }
    out
}

pub fn is_url(token: &str) -> bool {
    token.starts_with("http://") || token.starts_with("https://") || token.starts_with("www.")
}

pub fn is_mention(token: &str) -> bool {
    token.len() > 1 && token.starts_with('@')
}

pub fn is_hashtag(token: &str) -> bool {
    token.len() > 1 && token.starts_with('#')
}

pub fn has_alphanumeric(token: &str) -> bool {
    token.chars().any(char::is_alphanumeric)
}

fn is_tag_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '-')
}

fn tokenize_chunk(chunk: &str, out: &mut Vec<String>) {
    if is_url(chunk) {
        let url = chunk.trim_end_matches(|c: char| !c.is_alphanumeric() && c != '/');
        if url.len() > "www.".len() {
            out.push(url.to_string());
        }
        return;
    }

    let chars: Vec<char> = chunk.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if (c == '#' || c == '@') && i + 1 < chars.len() && is_tag_char(chars[i + 1]) {
            let start = i;
            i += 1;
            while i < chars.len() && is_tag_char(chars[i]) {
                i += 1;
            }
            out.push(chars[start..i].iter().collect());
        } else if c.is_alphanumeric() {
            let start = i;
            i += 1;
            loop {
                while i < chars.len() && chars[i].is_alphanumeric() {
                    i += 1;
                }
                // keep a joiner only when it sits between two alphanumerics
                if i + 1 < chars.len() && is_joiner(chars[i]) && chars[i + 1].is_alphanumeric() {
                    i += 1;
                    continue;
                }
                break;
            }
            out.push(chars[start..i].iter().collect());
        } else {
            i += 1;
        }
    }
}

/// Tokens used for corpus statistics and phrase queries: tokenizer output
/// minus URLs, `@`-mentions and tokens without any alphanumeric character.
pub fn clean_tokens(text: &str) -> Vec<String> {
    tokenize(text)
        .into_iter()
        .filter(|t| !is_url(t) && !is_mention(t) && has_alphanumeric(t))
        .collect()
}
