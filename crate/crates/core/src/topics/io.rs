//! Topic model files: a binary count table and a JSON sidecar.
//!
//! Binary layout (little-endian): `"T4FL"`, version u32, K u32, |V| u32,
//! alpha f64, beta f64, iterations u64, seed u64, 32-byte vocabulary
//! SHA-256, the vocabulary as length-prefixed strings, then the `|V| x K`
//! u32 word-topic counts row by row.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::lda::{top_words, LdaParams, TopicModel};
use crate::error::{Error, Result};
use crate::text::{VocabMode, Vocabulary};

const MAGIC: &[u8; 4] = b"T4FL";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordCount {
    pub word: String,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopicSummary {
    pub topic: usize,
    pub total: u64,
    pub top_words: Vec<WordCount>,
}

/// Human-readable listing of each topic's top words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopicSidecar {
    pub topics: usize,
    pub vocab_sha256: String,
    pub summaries: Vec<TopicSummary>,
}

fn bad(msg: &str) -> Error {
    Error::ModelFormat(msg.to_string())
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len()).ok_or_else(|| bad("truncated"))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().unwrap())
    }
}

impl TopicModel {
    pub fn sidecar(&self, n: usize) -> TopicSidecar {
        let summaries = (0..self.topics())
            .map(|k| TopicSummary {
                topic: k,
                total: self.topic_totals[k],
                top_words: top_words(self, k, n)
                    .expect("topic in range")
                    .into_iter()
                    .map(|(word, count)| WordCount { word, count })
                    .collect(),
            })
            .collect();
        TopicSidecar {
            topics: self.topics(),
            vocab_sha256: self.vocab.digest(),
            summaries,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let p = &self.params;
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(p.topics as u32).to_le_bytes());
        out.extend_from_slice(&(self.vocab.len() as u32).to_le_bytes());
        out.extend_from_slice(&p.alpha.to_le_bytes());
        out.extend_from_slice(&p.beta.to_le_bytes());
        out.extend_from_slice(&(p.iterations as u64).to_le_bytes());
        out.extend_from_slice(&p.seed.to_le_bytes());
        out.extend_from_slice(&hex::decode(self.vocab.digest()).expect("hex digest"));
        for t in self.vocab.tokens() {
            out.extend_from_slice(&(t.len() as u32).to_le_bytes());
            out.extend_from_slice(t.as_bytes());
        }
        for c in &self.word_topic {
            out.extend_from_slice(&c.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(buf: &[u8]) -> Result<Self> {
        let mut r = Reader { buf, pos: 0 };
        if &r.array::<4>()? != MAGIC {
            return Err(bad("bad magic"));
        }
        if u32::from_le_bytes(r.array()?) != VERSION {
            return Err(bad("unsupported version"));
        }
        let k = u32::from_le_bytes(r.array()?) as usize;
        let v = u32::from_le_bytes(r.array()?) as usize;
        let params = LdaParams {
            topics: k,
            alpha: f64::from_le_bytes(r.array()?),
            beta: f64::from_le_bytes(r.array()?),
            iterations: u64::from_le_bytes(r.array()?) as usize,
            seed: u64::from_le_bytes(r.array()?),
        };
        let digest = hex::encode(r.take(32)?);
        if k == 0 || v == 0 {
            return Err(bad("empty model"));
        }
        let mut tokens = Vec::with_capacity(v.min(buf.len()));
        for _ in 0..v {
            let n = u32::from_le_bytes(r.array()?) as usize;
            let s = std::str::from_utf8(r.take(n)?).map_err(|_| bad("vocabulary is not UTF-8"))?;
            tokens.push(s.to_string());
        }
        let vocab = Vocabulary::from_tokens(VocabMode::AllWords, tokens)?;
        if vocab.len() != v || vocab.digest() != digest {
            return Err(bad("vocabulary hash mismatch"));
        }
        let cells = v.checked_mul(k).ok_or_else(|| bad("size overflow"))?;
        let body = r.take(cells.checked_mul(4).ok_or_else(|| bad("size overflow"))?)?;
        if r.pos != buf.len() {
            return Err(bad("trailing bytes"));
        }
        let word_topic: Vec<u32> = body.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect();
        let mut topic_totals = vec![0u64; k];
        for (i, &c) in word_topic.iter().enumerate() {
            topic_totals[i % k] += u64::from(c);
        }
        Ok(TopicModel {
            params,
            vocab,
            word_topic,
            topic_totals,
        })
    }

    /// Writes `path` and a `<path>.topics.json` sidecar with the top 20
    /// words per topic.
    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))?;
        let side = sidecar_path(path);
        let json = serde_json::to_vec_pretty(&self.sidecar(20))?;
        std::fs::write(&side, json).map_err(|e| Error::io(&side, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let buf = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&buf)
    }
}

pub(crate) fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".topics.json");
    s.into()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topics::lda::tests::planted_docs;
    use crate::topics::train_lda;

    fn model() -> TopicModel {
        let params = LdaParams {
            iterations: 10,
            seed: 1,
            ..LdaParams::with_topics(3)
        };
        train_lda(&planted_docs(30, 1), params).unwrap()
    }

    #[test]
    fn roundtrip_and_sidecar() {
        let m = model();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.lda");
        m.save(&p).unwrap();
        assert_eq!(TopicModel::load(&p).unwrap(), m);
        let side: TopicSidecar =
            serde_json::from_slice(&std::fs::read(sidecar_path(&p)).unwrap()).unwrap();
        assert_eq!(side.topics, 3);
        assert!(side.summaries.iter().all(|s| s.top_words.len() <= 20));
        assert_eq!(side.vocab_sha256, m.vocab().digest());
    }

    #[test]
    fn corrupt_files_rejected() {
        let bytes = model().to_bytes();
        assert!(TopicModel::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut flipped = bytes.clone();
        // first byte of the first vocabulary token
        flipped[4 + 4 + 4 + 4 + 8 + 8 + 8 + 8 + 32 + 4] ^= 1;
        assert!(matches!(TopicModel::from_bytes(&flipped), Err(Error::ModelFormat(_))));
        assert!(TopicModel::from_bytes(b"T4FX").is_err());
    }
}
