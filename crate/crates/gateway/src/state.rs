use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use t4f_core::analytics::{AnalyticsCorpus, TopicAssignments};
use t4f_core::corpus::{corpus_stats, CorpusSnapshot, Stats};
use t4f_core::pipeline::Resources;
use t4f_core::tasks::TaskResult;
use t4f_core::topics::TopicModel;

use crate::api::MAX_RESPONSE_BYTES;
use crate::error::GatewayError;

/// Everything the service reads. Built once, never mutated while serving.
#[derive(Debug)]
pub struct ServiceState {
    snapshot: CorpusSnapshot,
    corpus: AnalyticsCorpus,
    stats: Stats,
    food: HashSet<String>,
    topic_model: Option<TopicModel>,
    topics: Option<TopicAssignments>,
    runs: BTreeMap<String, TaskResult>,
    static_dir: Option<PathBuf>,
    response_limit: usize,
}

impl ServiceState {
    pub fn new(snapshot: CorpusSnapshot, res: &Resources) -> Self {
        let snapshot = if snapshot.is_normalized() {
            snapshot
        } else {
            snapshot.normalize(&res.gazetteer)
        };
        let corpus = AnalyticsCorpus::build(&snapshot, res);
        ServiceState {
            stats: corpus_stats(&snapshot),
            snapshot,
            corpus,
            food: res.food.clone(),
            topic_model: None,
            topics: None,
            runs: BTreeMap::new(),
            static_dir: None,
            response_limit: MAX_RESPONSE_BYTES,
        }
    }

    /// Attaches a topic model and tags every tweet with its top topic.
    pub fn with_topic_model(mut self, model: TopicModel, fold_in_iterations: usize, seed: u64) -> Self {
        self.topics = Some(TopicAssignments::infer(&model, &self.corpus, fold_in_iterations, seed));
        self.topic_model = Some(model);
        self
    }

    pub fn with_runs(mut self, runs: BTreeMap<String, TaskResult>) -> Self {
        self.runs = runs;
        self
    }

    pub fn with_static_dir(mut self, dir: Option<PathBuf>) -> Self {
        self.static_dir = dir;
        self
    }

    /// Overrides the response size cap (bytes).
    pub fn with_response_limit(mut self, bytes: usize) -> Self {
        self.response_limit = bytes;
        self
    }

    pub fn snapshot(&self) -> &CorpusSnapshot {
        &self.snapshot
    }

    pub fn corpus(&self) -> &AnalyticsCorpus {
        &self.corpus
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    pub fn food(&self) -> &HashSet<String> {
        &self.food
    }

    pub fn topic_model(&self) -> Option<&TopicModel> {
        self.topic_model.as_ref()
    }

    pub fn topics(&self) -> Option<&TopicAssignments> {
        self.topics.as_ref()
    }

    pub fn runs(&self) -> &BTreeMap<String, TaskResult> {
        &self.runs
    }

    pub fn static_dir(&self) -> Option<&Path> {
        self.static_dir.as_deref()
    }

    pub fn response_limit(&self) -> usize {
        self.response_limit
    }
}

/// Loads every `*.json` task result in `dir`; the file stem is the run id.
pub fn load_runs_dir(dir: &Path) -> Result<BTreeMap<String, TaskResult>, GatewayError> {
    let io = |e| GatewayError::Io {
        path: dir.to_path_buf(),
        source: e,
    };
    let mut runs = BTreeMap::new();
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && !p.to_string_lossy().ends_with(".manifest.json"))
        .collect();
    paths.sort();
    for path in paths {
        let text = fs::read_to_string(&path).map_err(|e| GatewayError::Io {
            path: path.clone(),
            source: e,
        })?;
        let result: TaskResult =
            serde_json::from_str(&text).map_err(|e| GatewayError::RunFormat { path: path.clone(), source: e })?;
        let id = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        if runs.insert(id.clone(), result).is_some() {
            return Err(GatewayError::DuplicateRun(id));
        }
    }
    Ok(runs)
}
