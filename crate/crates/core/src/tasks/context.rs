use crate::error::Result;
use crate::learn::{featurize_group, FeatureSpace, SparseVector};
use crate::pipeline::{PreparedCorpus, Resources};
use crate::text::{VocabMode, Vocabulary};
use crate::topics::{infer_all, train_lda, TopicModel};

use super::config::TaskConfig;

/// Vocabulary, optional topic model and per-tweet topics for one feature
/// configuration. The topic model is trained once on the whole corpus.
#[derive(Debug, Clone)]
pub struct FeatureContext {
    space: FeatureSpace,
    topic_model: Option<TopicModel>,
    topic_of: Option<Vec<usize>>,
}

impl FeatureContext {
    pub fn build(prep: &PreparedCorpus, res: &Resources, config: &TaskConfig) -> Result<Self> {
        let mode = config.feature_mode;
        let docs: Vec<Vec<String>> = prep
            .tweets()
            .iter()
            .map(|t| t.tokens.iter().filter(|w| mode.admits(w, &res.food)).cloned().collect())
            .collect();
        let vocab = Vocabulary::build(docs.iter().map(Vec::as_slice), mode, &res.food)?;
        if !config.use_lda {
            return Ok(FeatureContext {
                space: FeatureSpace::new(vocab, 0),
                topic_model: None,
                topic_of: None,
            });
        }
        let params = crate::topics::LdaParams {
            seed: config.seed,
            ..config.lda
        };
        let model = train_lda(&docs, params)?;
        let topics = infer_all(&model, &docs, config.fold_in_iterations, config.seed);
        Ok(FeatureContext {
            space: FeatureSpace::new(vocab, model.topics()),
            topic_model: Some(model),
            topic_of: Some(topics),
        })
    }

    pub fn space(&self) -> &FeatureSpace {
        &self.space
    }

    pub fn mode(&self) -> VocabMode {
        self.space.vocab().mode()
    }

    pub fn topic_model(&self) -> Option<&TopicModel> {
        self.topic_model.as_ref()
    }

    /// Top topic of tweet `i` when topics are in use.
    pub fn topic_of(&self, i: usize) -> Option<usize> {
        self.topic_of.as_ref().map(|t| t[i])
    }

    /// Pools the tweets at `indices` into one instance.
    pub fn pool(&self, prep: &PreparedCorpus, indices: &[usize]) -> Result<SparseVector> {
        let docs: Vec<&[String]> = indices.iter().map(|&i| prep.tweets()[i].tokens.as_slice()).collect();
        let topics: Option<Vec<usize>> = self.topic_of.as_ref().map(|t| indices.iter().map(|&i| t[i]).collect());
        featurize_group(&docs, &self.space, topics.as_deref())
    }
}
