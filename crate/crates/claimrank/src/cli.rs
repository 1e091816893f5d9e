//! Command-line surface.
//!
//! Exit codes: 0 success, 1 usage, 2 invalid input or configuration,
//! 3 runtime failure. Results go to standard output, logs to standard error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use claimrank_core::corpus::{agreement_table, derive_any_labels};
use claimrank_core::features::LexiconKind;
use log::info;

use crate::config::{self, ExperimentConfig, Overrides};
use crate::error::{Error, Result};
use crate::experiment::{
    dump_predictions, evaluate_predictions, feature_ablation, featurize_fold, load_predictions, predictions_jsonl,
    run_experiment, source_ablation, Inputs, RunOptions,
};
use crate::{io, report, synth};

#[derive(Debug, Parser)]
#[command(name = "claimrank", version, about = "Multi-source check-worthiness ranking for debate transcripts")]
struct Cli {
    /// More log output on standard error (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a corpus, and optionally a sidecar file and lexicons, against their schemas.
    Validate {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        sidecar: Option<PathBuf>,
        /// Lexicon as KIND=PATH (kinds: bias, assertive, subjective, positive, negative).
        #[arg(long = "lexicon", value_name = "KIND=PATH")]
        lexicons: Vec<String>,
    },
    /// Print corpus size and the source agreement table.
    Stats {
        #[arg(long)]
        corpus: PathBuf,
    },
    /// Write the standardized feature matrix of one fold as CSV.
    Featurize {
        #[command(flatten)]
        exp: ExpArgs,
        /// Fold index (0-based; fold i tests on the i-th debate).
        #[arg(long, default_value_t = 0)]
        fold: usize,
    },
    /// Run the cross-validation grid and write metrics, tables, predictions and loss histories.
    Train {
        #[command(flatten)]
        exp: ExpArgs,
        /// Also write every trained network under models/ (forces retraining).
        #[arg(long)]
        save_models: bool,
    },
    /// Recompute metrics from a predictions.jsonl dump.
    Evaluate {
        #[arg(long)]
        predictions: PathBuf,
        /// Directory for metrics.csv and table.txt.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Leave out each feature group in turn from the multi model.
    AblateFeatures {
        #[command(flatten)]
        exp: ExpArgs,
    },
    /// Leave out each source in turn from the multi task set.
    AblateSources {
        #[command(flatten)]
        exp: ExpArgs,
    },
    /// Write per-sentence scores, labels and fold ids to predictions.jsonl.
    Dump {
        #[command(flatten)]
        exp: ExpArgs,
    },
    /// Combine metrics.csv files into one comparison table.
    Report {
        /// metrics.csv files; the first one is the baseline for improvement markers.
        #[arg(long = "metrics", required = true)]
        metrics: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a synthetic corpus and sidecar file.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 4)]
        debates: usize,
        #[arg(long, default_value_t = 60)]
        sentences: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        topics: usize,
        #[arg(long, default_value_t = 8)]
        embedding_dim: usize,
        /// Copy one label draw into all nine source columns.
        #[arg(long)]
        identical_labels: bool,
    },
}

/// Flags shared by the experiment commands; they override the config file.
#[derive(Debug, Args)]
struct ExpArgs {
    /// Experiment config file (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    sidecar: Option<PathBuf>,
    /// Output root; results go to <out>/<name>/.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    variant: Option<String>,
    /// ALL or a source code.
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    epochs: Option<usize>,
    /// Master seed; rerun r uses seed + r.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reruns: Option<usize>,
    /// Worker threads for grid cells.
    #[arg(long)]
    jobs: Option<usize>,
    /// Ignore and do not write cell checkpoints.
    #[arg(long)]
    no_cache: bool,
}

impl ExpArgs {
    fn load(&self) -> Result<ExperimentConfig> {
        let flags = Overrides {
            corpus: self.corpus.clone(),
            sidecar: self.sidecar.clone(),
            output: self.out.clone(),
            name: self.name.clone(),
            variant: self.variant.clone(),
            target: self.target.clone(),
            epochs: self.epochs,
            seed: self.seed,
            reruns: self.reruns,
            jobs: self.jobs,
        };
        config::load(self.config.as_deref(), &flags)
    }

    fn options(&self, cfg: &ExperimentConfig) -> RunOptions {
        let dir = cfg.out_dir();
        RunOptions {
            jobs: cfg.jobs,
            cell_dir: (!self.no_cache).then(|| dir.join("cells")),
            reuse_cells: true,
            history_dir: Some(dir.join("history")),
            model_dir: None,
        }
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .target(env_logger::Target::Stderr)
        .try_init();
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    init_logging(cli.verbose);
    let name = command_name(&cli.command);
    match dispatch(cli.command) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {name}: {e}");
            e.exit_code()
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Stats { .. } => "stats",
        Command::Featurize { .. } => "featurize",
        Command::Train { .. } => "train",
        Command::Evaluate { .. } => "evaluate",
        Command::AblateFeatures { .. } => "ablate-features",
        Command::AblateSources { .. } => "ablate-sources",
        Command::Dump { .. } => "dump",
        Command::Report { .. } => "report",
        Command::Synth { .. } => "synth",
    }
}

fn dispatch(command: Command) -> Result<String> {
    match command {
        Command::Validate { corpus, sidecar, lexicons } => validate(&corpus, sidecar.as_deref(), &lexicons),
        Command::Stats { corpus } => stats(&corpus),
        Command::Featurize { exp, fold } => featurize(&exp, fold),
        Command::Train { exp, save_models } => train(&exp, save_models),
        Command::Evaluate { predictions, out } => evaluate(&predictions, out.as_deref()),
        Command::AblateFeatures { exp } => ablate_features(&exp),
        Command::AblateSources { exp } => ablate_sources(&exp),
        Command::Dump { exp } => dump(&exp),
        Command::Report { metrics, out } => combine_reports(&metrics, &out),
        Command::Synth { out, debates, sentences, seed, topics, embedding_dim, identical_labels } => {
            let cfg = synth::SynthConfig {
                debates,
                sentences_per_debate: sentences,
                topic_dim: topics,
                embedding_dim,
                seed,
                identical_labels,
                constant_topics: false,
                include_excerpt: true,
            };
            write_synth(&cfg, &out)
        }
    }
}

fn validate(corpus: &Path, sidecar: Option<&Path>, lexicons: &[String]) -> Result<String> {
    let c = io::load_corpus(corpus)?;
    let mut out = format!("corpus ok: {} debates, {} sentences\n", c.debates().len(), c.len());
    if let Some(p) = sidecar {
        let store = io::ingest_annotations(p, &c)?;
        writeln!(out, "sidecar ok: {} records, {} topics, embedding dimension {}", store.len(), store.topic_dim(), store.embedding_dim())
            .unwrap();
    }
    for spec in lexicons {
        let (kind, path) = spec
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("lexicon {spec:?} is not KIND=PATH")))?;
        let kind = LexiconKind::from_name(kind).ok_or_else(|| Error::Config(format!("unknown lexicon kind {kind:?}")))?;
        let lex = io::load_lexicon(Path::new(path), kind)?;
        writeln!(out, "lexicon ok: {} ({}), {} entries", lex.name, kind.name(), lex.len()).unwrap();
    }
    Ok(out)
}

/// Corpus size and the agreement table in the published layout.
pub fn stats_text(corpus: &claimrank_core::Corpus) -> String {
    let any = derive_any_labels(corpus).iter().filter(|x| **x).count();
    let table = agreement_table(corpus);
    let mut out = format!(
        "debates        {}\nsentences      {}\nANY positives  {}\n\n",
        corpus.debates().len(),
        corpus.len(),
        any
    );
    out.push_str("Selected by   Number of   Cumulative\n# sources     sentences   sum\n");
    for n in (1..=9).rev() {
        writeln!(out, "{n:<13} {:<11} {}", table.exact(n), table.cumulative(n)).unwrap();
    }
    out
}

fn stats(corpus: &Path) -> Result<String> {
    Ok(stats_text(&io::load_corpus(corpus)?))
}

fn featurize(exp: &ExpArgs, fold: usize) -> Result<String> {
    let cfg = exp.load()?;
    let inputs = Inputs::load(&cfg)?;
    let (f, m) = featurize_fold(&inputs, cfg.spec.groups, fold)?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let mut header = vec!["debate_id".to_string(), "index".to_string()];
    for (g, span) in m.group_spans() {
        header.extend((0..span.len()).map(|k| format!("{}:{k}", g.name())));
    }
    w.write_record(&header).expect("in-memory csv");
    for (row, s) in inputs.corpus.sentences().enumerate() {
        let mut rec = vec![s.debate_id.clone(), s.index.to_string()];
        rec.extend(m.row(row).iter().map(|v| format!("{v:?}")));
        w.write_record(&rec).expect("in-memory csv");
    }
    let path = cfg.out_dir().join(format!("features_fold{fold}.csv"));
    report::write(&path, w.into_inner().expect("in-memory csv"))?;
    let mut out = format!(
        "fold {fold}: test debate {}, {} rows x {} columns -> {}\n",
        f.test_debate_id,
        m.n_rows(),
        m.n_cols(),
        path.display()
    );
    for (g, span) in m.group_spans() {
        writeln!(out, "  {:<14} {:>6} columns", g.name(), span.len()).unwrap();
    }
    Ok(out)
}

fn train(exp: &ExpArgs, save_models: bool) -> Result<String> {
    let cfg = exp.load()?;
    let inputs = Inputs::load(&cfg)?;
    let dir = cfg.out_dir();
    let mut opts = exp.options(&cfg);
    if save_models {
        opts.model_dir = Some(dir.join("models"));
        opts.reuse_cells = false;
    }
    let result = run_experiment(&inputs, &cfg.spec, &opts)?;
    let reports = [result.report.clone()];
    report::render_report(&reports, &dir)?;
    report::write(&dir.join("predictions.jsonl"), predictions_jsonl(&dump_predictions(&result, &inputs.corpus)))?;
    info!("wrote {}", dir.display());
    Ok(format!("{}\nwritten to {}\n", report::render_table(&reports)?, dir.display()))
}

fn evaluate(predictions: &Path, out: Option<&Path>) -> Result<String> {
    let rep = evaluate_predictions(&load_predictions(predictions)?)?;
    let reports = [rep];
    if let Some(dir) = out {
        report::render_report(&reports, dir)?;
    }
    report::render_table(&reports)
}

fn ablate_features(exp: &ExpArgs) -> Result<String> {
    let cfg = exp.load()?;
    let inputs = Inputs::load(&cfg)?;
    let rows = feature_ablation(&inputs, &cfg.spec, &exp.options(&cfg))?;
    let dir = cfg.out_dir();
    let text = report::render_feature_ablation(&rows);
    report::write(&dir.join("ablation_features.csv"), report::feature_ablation_csv(&rows))?;
    report::write(&dir.join("ablation_features.txt"), &text)?;
    let reports: Vec<_> = rows.iter().map(|r| r.report.clone()).collect();
    report::write(&dir.join("metrics.csv"), report::metrics_csv(&reports))?;
    Ok(text)
}

fn ablate_sources(exp: &ExpArgs) -> Result<String> {
    let cfg = exp.load()?;
    let inputs = Inputs::load(&cfg)?;
    let m = source_ablation(&inputs, &cfg.spec, &exp.options(&cfg))?;
    let dir = cfg.out_dir();
    let text = report::render_ablation_heat(&m);
    report::write(&dir.join("ablation_matrix.csv"), report::ablation_matrix_csv(&m))?;
    report::write(&dir.join("ablation_matrix.txt"), &text)?;
    report::render_report(std::slice::from_ref(&m.base), &dir)?;
    Ok(text)
}

fn dump(exp: &ExpArgs) -> Result<String> {
    let cfg = exp.load()?;
    let inputs = Inputs::load(&cfg)?;
    let result = run_experiment(&inputs, &cfg.spec, &exp.options(&cfg))?;
    let records = dump_predictions(&result, &inputs.corpus);
    let path = cfg.out_dir().join("predictions.jsonl");
    report::write(&path, predictions_jsonl(&records))?;
    Ok(format!("{} records -> {}\n", records.len(), path.display()))
}

fn combine_reports(metrics: &[PathBuf], out: &Path) -> Result<String> {
    let mut reports = Vec::new();
    for p in metrics {
        reports.extend(report::load_metrics_csv(p)?);
    }
    report::render_report(&reports, out)?;
    report::render_table(&reports)
}

fn write_synth(cfg: &synth::SynthConfig, out: &Path) -> Result<String> {
    if cfg.debates < 1 || cfg.sentences_per_debate < 1 || cfg.topic_dim < 1 || cfg.embedding_dim < 1 {
        return Err(Error::Config("synthetic corpus sizes must be at least 1".into()));
    }
    let (corpus, records) = synth::generate(cfg);
    std::fs::create_dir_all(out).map_err(|e| Error::write(out, e))?;
    io::write_corpus(&corpus, &out.join("corpus.jsonl"))?;
    let header = format!(
        "synthetic sidecar seed={} k={} d={} discourse=random",
        cfg.seed, cfg.topic_dim, cfg.embedding_dim
    );
    io::write_sidecar(&records, &header, &out.join("sidecar.jsonl"))?;
    Ok(format!("{} debates, {} sentences -> {}\n", corpus.debates().len(), corpus.len(), out.display()))
}
