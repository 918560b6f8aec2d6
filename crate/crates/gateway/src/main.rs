use std::fs;
use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use t4f_core::analytics::{rank_terms_tfidf, AnalyticsCorpus};
use t4f_core::corpus::{ingest_jsonl, CorpusSnapshot, FieldMapping, HashtagFilter};
use t4f_core::data::DataSet;
use t4f_core::pipeline::{PreparedCorpus, Resources};
use t4f_core::tasks::{
    generate_synthetic_corpus, learning_curve, run_locale_task, run_state_characteristic_task, FeatureContext,
    LabelDataset, LocaleLevel, StateLabelSet, SyntheticSpec, TaskConfig,
};
use t4f_core::text::VocabMode;
use t4f_core::topics::{train_lda, LdaParams, TopicModel, DEFAULT_FOLD_IN_ITERATIONS};
use t4f_gateway::{load_runs_dir, serve, to_canonical_json, ServiceState};

/// Food-tweet analytics: ingestion, topic models, prediction tasks and
/// a read-only query API.
#[derive(Debug, Parser)]
#[command(name = "t4f", version)]
struct Cli {
    /// Directory holding gazetteer, lexicon and label files (defaults to
    /// the built-in tables).
    #[arg(long, global = true, env = "T4F_DATA_DIR")]
    data_dir: Option<PathBuf>,

    /// Log more (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Filter a JSONL post stream by meal hashtags into a snapshot.
    Ingest(IngestArgs),
    /// Resolve author locations of a snapshot.
    Normalize(NormalizeArgs),
    /// Write a synthetic corpus with planted signal and its manifest.
    Synth(SynthArgs),
    /// Train an LDA topic model on a snapshot.
    Lda(LdaArgs),
    /// Run a prediction task.
    Task {
        #[command(subcommand)]
        task: TaskCommand,
    },
    /// Locale accuracy over a grid of train and test fractions.
    Curve(CurveArgs),
    /// Most distinctive term per state by tf-idf.
    RankTerms(RankTermsArgs),
    /// Serve the read-only HTTP API.
    Serve(ServeArgs),
}

#[derive(Debug, Subcommand)]
enum TaskCommand {
    /// Leave-one-state-out prediction of a binary state characteristic.
    StateChars(StateCharsArgs),
    /// Author locale prediction with chronological splits.
    Locale(LocaleArgs),
}

#[derive(Debug, Args)]
struct IngestArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated hashtag filter (default: the seven meal tags).
    #[arg(long)]
    hashtags: Option<String>,
    /// Also resolve author locations.
    #[arg(long)]
    normalize: bool,
}

#[derive(Debug, Args)]
struct NormalizeArgs {
    #[arg(long)]
    snapshot: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Preset name (default, cities, null, small) or a JSON spec file.
    #[arg(long, default_value = "default")]
    spec: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    tweets_per_locale: Option<usize>,
    #[arg(long)]
    marker_rate: Option<f64>,
}

#[derive(Debug, Args)]
struct LdaArgs {
    #[arg(long)]
    snapshot: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 200)]
    topics: usize,
    /// Gibbs sweeps.
    #[arg(long, default_value_t = 1000)]
    iterations: usize,
    /// Document prior (default 5 / topics).
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    beta: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = "all_words")]
    features: VocabMode,
}

#[derive(Debug, Args)]
struct FeatureArgs {
    #[arg(long)]
    snapshot: PathBuf,
    /// all_words, hashtags, food or food_hashtags.
    #[arg(long, default_value = "all_words")]
    features: VocabMode,
    /// Add one feature per LDA topic.
    #[arg(long)]
    lda: bool,
    #[arg(long, default_value_t = 200)]
    topics: usize,
    #[arg(long, default_value_t = 1000)]
    lda_iterations: usize,
    #[arg(long, default_value_t = DEFAULT_FOLD_IN_ITERATIONS)]
    fold_in_iterations: usize,
    /// SVM regularization.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    bootstrap: usize,
    #[arg(long, default_value_t = 20)]
    top_k: usize,
    /// Result JSON path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl FeatureArgs {
    fn config(&self) -> TaskConfig {
        let mut cfg = TaskConfig {
            feature_mode: self.features,
            use_lda: self.lda,
            lda: LdaParams {
                iterations: self.lda_iterations,
                ..LdaParams::with_topics(self.topics)
            },
            fold_in_iterations: self.fold_in_iterations,
            seed: self.seed,
            bootstrap_iterations: self.bootstrap,
            top_k: self.top_k,
            ..TaskConfig::default()
        };
        cfg.svm.c = self.c;
        cfg
    }
}

#[derive(Debug, Args)]
struct StateCharsArgs {
    /// overweight, diabetes or political.
    #[arg(long)]
    dataset: LabelDataset,
    #[command(flatten)]
    common: FeatureArgs,
}

#[derive(Debug, Args)]
struct LocaleArgs {
    /// city, state or region.
    #[arg(long)]
    level: LocaleLevel,
    #[arg(long, default_value_t = 1.0)]
    train_fraction: f64,
    #[arg(long, default_value_t = 1.0)]
    test_fraction: f64,
    #[command(flatten)]
    common: FeatureArgs,
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[arg(long)]
    level: LocaleLevel,
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.4,0.6,0.8,1.0")]
    fractions: Vec<f64>,
    #[command(flatten)]
    common: FeatureArgs,
}

#[derive(Debug, Args)]
struct RankTermsArgs {
    #[arg(long)]
    snapshot: PathBuf,
    #[arg(long, default_value = "food")]
    vocab: VocabMode,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long)]
    snapshot: PathBuf,
    /// Topic model for topic heatmaps and top words.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Directory of task result JSON files.
    #[arg(long)]
    runs: Option<PathBuf>,
    /// UI bundle directory.
    #[arg(long = "static")]
    static_dir: Option<PathBuf>,
    #[arg(long, default_value = "127.0.0.1")]
    host: IpAddr,
    #[arg(long, default_value_t = 8080)]
    port: u16,
    /// Allow cross-origin reads (UI development).
    #[arg(long)]
    cors: bool,
    #[arg(long, default_value_t = DEFAULT_FOLD_IN_ITERATIONS)]
    fold_in_iterations: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

/// A bad argument detected after parsing.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct UsageError(String);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Joins the error chain, skipping causes already spelled out by their parent.
fn describe(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain() {
        let msg = cause.to_string();
        if !out.ends_with(&msg) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&msg);
        }
    }
    out
}

fn create_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
        }
        _ => Ok(()),
    }
}

/// 1 for usage errors, 2 for data errors.
fn exit_code(e: &anyhow::Error) -> u8 {
    let usage = e.chain().any(|c| {
        c.is::<UsageError>() || matches!(c.downcast_ref::<t4f_core::Error>(), Some(t4f_core::Error::InvalidArgument(_)))
    });
    if usage {
        1
    } else {
        2
    }
}

fn resources(data_dir: Option<&Path>) -> Result<Resources> {
    let data = match data_dir {
        Some(dir) => DataSet::from_dir(dir).with_context(|| format!("loading data tables from {}", dir.display()))?,
        None => DataSet::embedded(),
    };
    Ok(Resources::load(&data)?)
}

fn load_snapshot(path: &Path) -> Result<CorpusSnapshot> {
    CorpusSnapshot::load(path).with_context(|| format!("loading snapshot {}", path.display()))
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let json = to_canonical_json(value)?;
    match out {
        Some(path) => {
            create_parent(path)?;
            fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{json}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other.context("writing to stdout")?,
            }
        }
    }
    Ok(())
}

fn prepare(args: &FeatureArgs, res: &Resources) -> Result<(PreparedCorpus, FeatureContext, TaskConfig)> {
    let cfg = args.config();
    cfg.validate()?;
    let snapshot = load_snapshot(&args.snapshot)?;
    let prep = PreparedCorpus::prepare(&snapshot, res);
    let features = FeatureContext::build(&prep, res, &cfg)?;
    Ok((prep, features, cfg))
}

fn run(cli: Cli) -> Result<()> {
    let res = resources(cli.data_dir.as_deref())?;
    match cli.command {
        Command::Ingest(a) => {
            let filter = match &a.hashtags {
                Some(list) => HashtagFilter::parse_csv(list)?,
                None => HashtagFilter::default(),
            };
            let mut snap = ingest_jsonl(&a.input, &filter, &FieldMapping::default())?;
            if a.normalize {
                snap = snap.normalize(&res.gazetteer);
            }
            create_parent(&a.out)?;
            snap.save(&a.out)?;
            emit(snap.manifest(), None)
        }
        Command::Normalize(a) => {
            let snap = load_snapshot(&a.snapshot)?.normalize(&res.gazetteer);
            create_parent(&a.out)?;
            snap.save(&a.out)?;
            emit(snap.manifest(), None)
        }
        Command::Synth(a) => {
            let mut spec = if a.spec.ends_with(".json") {
                let text = fs::read_to_string(&a.spec).with_context(|| format!("reading spec {}", a.spec))?;
                serde_json::from_str(&text).map_err(|e| usage(format!("invalid spec file {}: {e}", a.spec)))?
            } else {
                SyntheticSpec::preset(&a.spec)?
            };
            if let Some(n) = a.tweets_per_locale {
                spec.tweets_per_locale = n;
            }
            if let Some(r) = a.marker_rate {
                spec.marker_rate = r;
            }
            let corpus = generate_synthetic_corpus(&spec, a.seed, &res)?;
            create_parent(&a.out)?;
            let manifest = corpus.write(&a.out)?;
            log::info!("wrote {} lines to {}", corpus.lines.len(), a.out.display());
            println!("{}", manifest.display());
            Ok(())
        }
        Command::Lda(a) => {
            if a.topics == 0 {
                bail!(usage("--topics must be positive"));
            }
            let snap = load_snapshot(&a.snapshot)?;
            let prep = PreparedCorpus::prepare(&snap, &res);
            let docs: Vec<Vec<String>> = prep
                .tweets()
                .iter()
                .map(|t| t.tokens.iter().filter(|w| a.features.admits(w, &res.food)).cloned().collect())
                .collect();
            let params = LdaParams {
                alpha: a.alpha.unwrap_or(5.0 / a.topics as f64),
                beta: a.beta,
                iterations: a.iterations,
                seed: a.seed,
                ..LdaParams::with_topics(a.topics)
            };
            let model = train_lda(&docs, params)?;
            create_parent(&a.out)?;
            model.save(&a.out)?;
            emit(&model.sidecar(10), None)
        }
        Command::Task { task } => match task {
            TaskCommand::StateChars(a) => {
                let (prep, features, cfg) = prepare(&a.common, &res)?;
                let labels = StateLabelSet::load(a.dataset, &res.data, &res.gazetteer)?;
                let result = run_state_characteristic_task(&prep, &features, &labels, &cfg)?;
                log::info!("{}: accuracy {:.4}, baseline {:.4}", result.task, result.accuracy, result.baseline);
                emit(&result, a.common.out.as_deref())
            }
            TaskCommand::Locale(a) => {
                let common = a.common;
                let (prep, features, mut cfg) = prepare(&common, &res)?;
                cfg.train_fraction = a.train_fraction;
                cfg.test_fraction = a.test_fraction;
                let result = run_locale_task(&prep, &features, a.level, &res.gazetteer, &cfg)?;
                log::info!("{}: accuracy {:.4}, baseline {:.4}", result.task, result.accuracy, result.baseline);
                emit(&result, common.out.as_deref())
            }
        },
        Command::Curve(a) => {
            let (prep, features, cfg) = prepare(&a.common, &res)?;
            let curve = learning_curve(&prep, &features, a.level, &res.gazetteer, &cfg, &a.fractions)?;
            emit(&curve, a.common.out.as_deref())
        }
        Command::RankTerms(a) => {
            let snap = load_snapshot(&a.snapshot)?;
            let corpus = AnalyticsCorpus::build(&snap, &res);
            emit(&rank_terms_tfidf(&corpus, a.vocab, &res.food), a.out.as_deref())
        }
        Command::Serve(a) => {
            let snap = load_snapshot(&a.snapshot)?;
            let mut state = ServiceState::new(snap, &res).with_static_dir(a.static_dir);
            if let Some(path) = &a.model {
                let model = TopicModel::load(path).with_context(|| format!("loading topic model {}", path.display()))?;
                state = state.with_topic_model(model, a.fold_in_iterations, a.seed);
            }
            if let Some(dir) = &a.runs {
                state = state.with_runs(load_runs_dir(dir)?);
            }
            let addr = SocketAddr::new(a.host, a.port);
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(serve(Arc::new(state), addr, a.cors, async {
                let _ = tokio::signal::ctrl_c().await;
                log::info!("shutting down");
            }))
            .with_context(|| format!("serving on {addr}"))?;
            Ok(())
        }
    }
}
