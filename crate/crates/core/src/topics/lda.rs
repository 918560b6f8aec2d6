use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{VocabMode, Vocabulary};

/// Sampler settings. `alpha` is the symmetric document-topic prior, `beta`
/// the symmetric topic-word prior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LdaParams {
    pub topics: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl LdaParams {
    /// `alpha = 5 / K`, `beta = 0.01`, 1000 sweeps.
    pub fn with_topics(topics: usize) -> Self {
        LdaParams {
            topics,
            alpha: 5.0 / topics.max(1) as f64,
            beta: 0.01,
            iterations: 1000,
            seed: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.topics == 0 {
            return Err(Error::invalid("topic count must be at least 1"));
        }
        if self.iterations == 0 {
            return Err(Error::invalid("iterations must be at least 1"));
        }
        if !(self.alpha > 0.0 && self.beta > 0.0 && self.alpha.is_finite() && self.beta.is_finite()) {
            return Err(Error::invalid("alpha and beta must be positive"));
        }
        Ok(())
    }
}

impl Default for LdaParams {
    fn default() -> Self {
        Self::with_topics(200)
    }
}

/// Trained word-topic counts; immutable and shareable across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicModel {
    pub(crate) params: LdaParams,
    pub(crate) vocab: Vocabulary,
    /// Row-major `|V| x K`.
    pub(crate) word_topic: Vec<u32>,
    pub(crate) topic_totals: Vec<u64>,
}

impl TopicModel {
    pub fn topics(&self) -> usize {
        self.params.topics
    }

    pub fn params(&self) -> &LdaParams {
        &self.params
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn topic_totals(&self) -> &[u64] {
        &self.topic_totals
    }

    pub fn word_topic_count(&self, word: usize, topic: usize) -> u32 {
        self.word_topic[word * self.params.topics + topic]
    }

    /// Smoothed `p(w | k)` over the whole vocabulary.
    pub fn word_distribution(&self, topic: usize) -> Result<Vec<f64>> {
        let k = self.topics();
        if topic >= k {
            return Err(Error::TopicOutOfRange { topic, topics: k });
        }
        let v = self.vocab.len() as f64;
        let denom = self.topic_totals[topic] as f64 + v * self.params.beta;
        Ok((0..self.vocab.len())
            .map(|w| (self.word_topic[w * k + topic] as f64 + self.params.beta) / denom)
            .collect())
    }

    /// Topic with the most assigned tokens, lowest id on ties.
    pub fn largest_topic(&self) -> usize {
        argmax_first(self.topic_totals.iter().map(|&c| c as f64))
    }

    /// Checks `sum_w n(w,k) == n(k)` for every topic.
    pub fn counts_consistent(&self) -> bool {
        let k = self.topics();
        let mut sums = vec![0u64; k];
        for (i, &c) in self.word_topic.iter().enumerate() {
            sums[i % k] += u64::from(c);
        }
        sums == self.topic_totals
    }
}

fn argmax_first(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Collapsed Gibbs sampler state, exposed so callers can observe
/// invariants between sweeps.
pub struct LdaSampler {
    params: LdaParams,
    vocab_size: usize,
    docs: Vec<Vec<u32>>,
    assignments: Vec<Vec<u32>>,
    doc_topic: Vec<Vec<u32>>,
    word_topic: Vec<u32>,
    topic_totals: Vec<u64>,
    token_count: u64,
    rng: ChaCha8Rng,
    weights: Vec<f64>,
}

impl LdaSampler {
    /// Random initial assignment of every token. `docs` hold word ids below
    /// `vocab_size`; empty documents are dropped.
    pub fn new(docs: Vec<Vec<u32>>, vocab_size: usize, params: LdaParams) -> Result<Self> {
        params.validate()?;
        let docs: Vec<Vec<u32>> = docs.into_iter().filter(|d| !d.is_empty()).collect();
        if docs.is_empty() {
            return Err(Error::invalid("no nonempty documents to train on"));
        }
        if docs.iter().flatten().any(|&w| w as usize >= vocab_size) {
            return Err(Error::invalid("word id outside the vocabulary"));
        }
        let k = params.topics;
        let token_count: u64 = docs.iter().map(|d| d.len() as u64).sum();
        if k as u64 > token_count {
            log::warn!("{k} topics for only {token_count} tokens");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let mut word_topic = vec![0u32; vocab_size * k];
        let mut topic_totals = vec![0u64; k];
        let mut doc_topic = Vec::with_capacity(docs.len());
        let mut assignments = Vec::with_capacity(docs.len());
        for doc in &docs {
            let mut nd = vec![0u32; k];
            let z: Vec<u32> = doc
                .iter()
                .map(|&w| {
                    let t = rng.gen_range(0..k);
                    nd[t] += 1;
                    word_topic[w as usize * k + t] += 1;
                    topic_totals[t] += 1;
                    t as u32
                })
                .collect();
            doc_topic.push(nd);
            assignments.push(z);
        }
        Ok(LdaSampler {
            params,
            vocab_size,
            docs,
            assignments,
            doc_topic,
            word_topic,
            topic_totals,
            token_count,
            rng,
            weights: vec![0.0; k],
        })
    }

    /// One pass resampling every token in document order.
    pub fn sweep(&mut self) {
        let k = self.params.topics;
        let (alpha, beta) = (self.params.alpha, self.params.beta);
        let vbeta = self.vocab_size as f64 * beta;
        for d in 0..self.docs.len() {
            for i in 0..self.docs[d].len() {
                let w = self.docs[d][i] as usize;
                let old = self.assignments[d][i] as usize;
                let row = w * k;
                self.doc_topic[d][old] -= 1;
                self.word_topic[row + old] -= 1;
                self.topic_totals[old] -= 1;

                let nd = &self.doc_topic[d];
                let mut total = 0.0;
                for t in 0..k {
                    let p = (nd[t] as f64 + alpha) * (self.word_topic[row + t] as f64 + beta)
                        / (self.topic_totals[t] as f64 + vbeta);
                    total += p;
                    self.weights[t] = total;
                }
                let u = self.rng.gen::<f64>() * total;
                let new = self.weights.partition_point(|&c| c <= u).min(k - 1);

                self.assignments[d][i] = new as u32;
                self.doc_topic[d][new] += 1;
                self.word_topic[row + new] += 1;
                self.topic_totals[new] += 1;
            }
        }
    }

    /// Total assigned tokens equal the corpus token count, and per-topic
    /// totals match both the word-topic and doc-topic tables.
    pub fn counts_conserved(&self) -> bool {
        let k = self.params.topics;
        if self.topic_totals.iter().sum::<u64>() != self.token_count {
            return false;
        }
        let mut by_word = vec![0u64; k];
        for (i, &c) in self.word_topic.iter().enumerate() {
            by_word[i % k] += u64::from(c);
        }
        let mut by_doc = vec![0u64; k];
        for nd in &self.doc_topic {
            for (t, &c) in nd.iter().enumerate() {
                by_doc[t] += u64::from(c);
            }
        }
        by_word == self.topic_totals && by_doc == self.topic_totals
    }

    pub fn token_count(&self) -> u64 {
        self.token_count
    }

    pub fn topic_totals(&self) -> &[u64] {
        &self.topic_totals
    }

    /// Per-token topic assignments of the nonempty documents.
    pub fn assignments(&self) -> &[Vec<u32>] {
        &self.assignments
    }

    pub fn into_model(self, vocab: Vocabulary) -> TopicModel {
        TopicModel {
            params: self.params,
            vocab,
            word_topic: self.word_topic,
            topic_totals: self.topic_totals,
        }
    }
}

/// Trains on token lists. The vocabulary is every token present in `docs`.
pub fn train_lda(docs: &[Vec<String>], params: LdaParams) -> Result<TopicModel> {
    let vocab = Vocabulary::from_tokens(VocabMode::AllWords, docs.iter().flatten().cloned().collect())?;
    let encoded: Vec<Vec<u32>> = docs.iter().map(|d| vocab.encode(d)).collect();
    let mut sampler = LdaSampler::new(encoded, vocab.len(), params)?;
    for it in 0..params.iterations {
        sampler.sweep();
        if (it + 1) % 100 == 0 {
            log::debug!("lda sweep {}/{}", it + 1, params.iterations);
        }
    }
    Ok(sampler.into_model(vocab))
}

/// Most probable topic for `doc` by Gibbs fold-in against frozen counts.
///
/// Returns the argmax of `n(d,k) + alpha` after the final sweep, lowest id
/// on ties. A document without in-vocabulary tokens gets the globally
/// largest topic.
pub fn infer_top_topic(model: &TopicModel, doc: &[String], fold_in_iterations: usize, seed: u64) -> usize {
    let words: Vec<usize> = model.vocab.encode(doc).into_iter().map(|w| w as usize).collect();
    if words.is_empty() {
        return model.largest_topic();
    }
    let k = model.topics();
    if k == 1 {
        return 0;
    }
    let (alpha, beta) = (model.params.alpha, model.params.beta);
    let vbeta = model.vocab.len() as f64 * beta;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nd = vec![0u32; k];
    let mut z: Vec<usize> = words
        .iter()
        .map(|_| {
            let t = rng.gen_range(0..k);
            nd[t] += 1;
            t
        })
        .collect();
    // p(w|k) is fixed during fold-in, so precompute it per token
    let phi: Vec<Vec<f64>> = words
        .iter()
        .map(|&w| {
            (0..k)
                .map(|t| (model.word_topic[w * k + t] as f64 + beta) / (model.topic_totals[t] as f64 + vbeta))
                .collect()
        })
        .collect();
    let mut cum = vec![0.0; k];
    for _ in 0..fold_in_iterations {
        for i in 0..words.len() {
            nd[z[i]] -= 1;
            let mut total = 0.0;
            for t in 0..k {
                total += (nd[t] as f64 + alpha) * phi[i][t];
                cum[t] = total;
            }
            let u = rng.gen::<f64>() * total;
            let new = cum.partition_point(|&c| c <= u).min(k - 1);
            z[i] = new;
            nd[new] += 1;
        }
    }
    argmax_first(nd.iter().map(|&c| c as f64 + alpha))
}

/// Top topic for each document, in parallel. Document `i` uses the ChaCha
/// stream `i` of `seed`, so results do not depend on scheduling.
pub fn infer_all(model: &TopicModel, docs: &[Vec<String>], fold_in_iterations: usize, seed: u64) -> Vec<usize> {
    docs.par_iter()
        .enumerate()
        .map(|(i, d)| infer_top_topic(model, d, fold_in_iterations, doc_seed(seed, i)))
        .collect()
}

fn doc_seed(seed: u64, index: usize) -> u64 {
    // splitmix64 finalizer over (seed, index)
    let mut z = seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The `n` highest-count words of `topic` (nonzero counts only), ties in
/// lexicographic order.
pub fn top_words(model: &TopicModel, topic: usize, n: usize) -> Result<Vec<(String, u32)>> {
    let k = model.topics();
    if topic >= k {
        return Err(Error::TopicOutOfRange { topic, topics: k });
    }
    let mut words: Vec<(usize, u32)> = (0..model.vocab.len())
        .map(|w| (w, model.word_topic[w * k + topic]))
        .filter(|&(_, c)| c > 0)
        .collect();
    // ids follow lexicographic order, so sorting by id breaks ties correctly
    words.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(words
        .into_iter()
        .take(n)
        .map(|(w, c)| (model.vocab.tokens()[w].clone(), c))
        .collect())
}
