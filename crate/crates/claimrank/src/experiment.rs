//! Cross-validation grid, ablation drivers and the per-sentence prediction dump.
//!
//! A run trains one network per (model, fold, rerun) cell. Cells are
//! independent: they are executed on a bounded worker pool and the report is
//! assembled afterwards in a fixed order, so the number of workers never
//! changes the output. Cells can be checkpointed to disk and are reused when
//! their fingerprint (inputs, spec, fold, seed) matches.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use claimrank_core::corpus::make_folds;
use claimrank_core::eval::{evaluate_source, MetricReport, RankedDebate};
use claimrank_core::features::{
    assemble_matrix, AnnotationStore, FeatureConfig, FeatureExtractor, FeatureGroup, FeatureMatrix, GroupSet, Lexicon,
};
use claimrank_core::model::{predict, train, Examples, MtlNetwork, TaskSet, TrainConfig, Variant};
use claimrank_core::{Corpus, Fold, SourceId};
use log::{debug, info};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::io;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    All,
    Source(SourceId),
}

impl Target {
    pub fn sources(self) -> Vec<SourceId> {
        match self {
            Target::All => SourceId::REAL.to_vec(),
            Target::Source(s) => vec![s],
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::All => f.write_str("ALL"),
            Target::Source(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub variant: Variant,
    pub target: Target,
    pub groups: GroupSet,
    pub train: TrainConfig,
    /// Source dropped from the multi task set (source ablation).
    pub removed_source: Option<SourceId>,
}

impl ExperimentSpec {
    pub fn new(name: impl Into<String>, variant: Variant, target: Target, groups: GroupSet, train: TrainConfig) -> Self {
        ExperimentSpec { name: name.into(), variant, target, groups, train, removed_source: None }
    }

    /// Name used in reports: the variant, plus any removed source or group.
    pub fn label(&self) -> String {
        let mut label = self.variant.name().to_string();
        if let Some(s) = self.removed_source {
            label.push_str(&format!("-no-{s}"));
        }
        for g in GroupSet::all().difference(self.groups).iter() {
            label.push_str(&format!("-no-{}", g.name()));
        }
        label
    }
}

/// One network per fold and rerun, and the targets its heads are scored on.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelPlan {
    pub key: String,
    pub task_set: TaskSet,
    pub evaluates: Vec<SourceId>,
}

fn stage(name: &'static str) -> impl FnOnce(claimrank_core::Error) -> Error {
    Error::stage(name)
}

fn config_error(e: claimrank_core::Error) -> Error {
    Error::Config(e.to_string())
}

pub fn plan_models(spec: &ExperimentSpec) -> Result<Vec<ModelPlan>> {
    let targets = spec.target.sources();
    let one = |key: &str, task_set: TaskSet, evaluates: Vec<SourceId>| ModelPlan { key: key.into(), task_set, evaluates };
    let per_target = |build: fn(SourceId) -> claimrank_core::Result<TaskSet>| {
        targets
            .iter()
            .map(|t| Ok(one(&format!("{}-{t}", spec.variant.name()), build(*t).map_err(config_error)?, vec![*t])))
            .collect::<Result<Vec<_>>>()
    };
    let plans = match (spec.removed_source, spec.variant) {
        (Some(removed), Variant::Multi) => {
            let evaluates: Vec<SourceId> = targets.into_iter().filter(|t| *t != removed).collect();
            vec![one(&format!("multi-no-{removed}"), TaskSet::multi_without(removed), evaluates)]
        }
        (Some(_), v) => return Err(Error::Config(format!("source removal needs variant multi, not {v}"))),
        (None, Variant::Singleton) => per_target(TaskSet::singleton)?,
        (None, Variant::SingletonAny) => per_target(TaskSet::singleton_any)?,
        (None, Variant::Any) => {
            let target = match spec.target {
                Target::All => None,
                Target::Source(s) => Some(s),
            };
            let ts = TaskSet::custom(Variant::Any, target, vec![SourceId::Any]).map_err(config_error)?;
            vec![one("any", ts, targets)]
        }
        (None, Variant::Multi) => vec![one("multi", TaskSet::multi(), targets)],
        (None, Variant::MultiAny) => vec![one("multi+any", TaskSet::multi_any(), targets)],
    };
    if plans.iter().all(|p| p.evaluates.is_empty()) {
        return Err(Error::Config("nothing to evaluate".into()));
    }
    Ok(plans)
}

/// Everything a run reads: corpus, sidecar annotations, lexicons, feature settings.
#[derive(Clone, Debug)]
pub struct Inputs {
    pub corpus: Corpus,
    pub annotations: Option<AnnotationStore>,
    pub lexicons: Vec<Lexicon>,
    pub features: FeatureConfig,
}

struct HashWriter(Sha256);

impl fmt::Write for HashWriter {
    fn write_str(&mut self, s: &str) -> fmt::Result {
        self.0.update(s.as_bytes());
        Ok(())
    }
}

fn digest(parts: &[&dyn fmt::Debug]) -> String {
    let mut w = HashWriter(Sha256::new());
    for p in parts {
        fmt::write(&mut w, format_args!("{p:?}\u{1f}")).expect("hashing never fails");
    }
    w.0.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl Inputs {
    pub fn load(cfg: &ExperimentConfig) -> Result<Inputs> {
        let corpus = io::load_corpus(&cfg.corpus)?;
        let annotations = match &cfg.sidecar {
            Some(p) => Some(io::ingest_annotations(p, &corpus)?),
            None => None,
        };
        let lexicons = cfg
            .lexicons
            .iter()
            .map(|(kind, path)| io::load_lexicon(path, *kind))
            .collect::<Result<Vec<_>>>()?;
        Ok(Inputs { corpus, annotations, lexicons, features: cfg.features.clone() })
    }

    /// Content hash used to key checkpointed cells.
    pub fn fingerprint(&self) -> String {
        digest(&[&self.corpus, &self.annotations, &self.lexicons, &self.features])
    }

    pub fn extractor(&self) -> FeatureExtractor<'_> {
        FeatureExtractor::new(&self.corpus, self.annotations.as_ref(), &self.lexicons, &self.features)
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Worker threads for grid cells.
    pub jobs: usize,
    /// Directory for cell checkpoints; `None` disables them.
    pub cell_dir: Option<PathBuf>,
    /// Reuse matching checkpoints found in `cell_dir`.
    pub reuse_cells: bool,
    /// Directory for per-cell loss histories.
    pub history_dir: Option<PathBuf>,
    /// Directory for trained network checkpoints.
    pub model_dir: Option<PathBuf>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { jobs: 1, cell_dir: None, reuse_cells: true, history_dir: None, model_dir: None }
    }
}

/// Output of one trained cell: test-debate scores per evaluated target, in
/// sentence order, and the loss history.
#[derive(Clone, Debug, PartialEq)]
pub struct CellResult {
    pub plan: usize,
    pub fold: usize,
    pub rerun: usize,
    pub seed: u64,
    pub scores: Vec<(SourceId, Vec<f64>)>,
    pub history: Vec<f64>,
}

impl CellResult {
    pub fn scores_for(&self, target: SourceId) -> Option<&[f64]> {
        self.scores.iter().find(|(s, _)| *s == target).map(|(_, v)| v.as_slice())
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub folds: Vec<Fold>,
    pub plans: Vec<ModelPlan>,
    /// Ordered by (plan, fold, rerun).
    pub cells: Vec<CellResult>,
    pub report: MetricReport,
}

impl ExperimentResult {
    pub fn cell(&self, plan: usize, fold: usize, rerun: usize) -> &CellResult {
        &self.cells[(plan * self.folds.len() + fold) * self.spec.train.reruns + rerun]
    }

    /// Plan whose network ranks sentences for `target`.
    pub fn plan_for(&self, target: SourceId) -> Option<usize> {
        self.plans.iter().position(|p| p.evaluates.contains(&target))
    }
}

#[derive(Serialize, Deserialize)]
struct CachedCell {
    fingerprint: String,
    seed: u64,
    scores: Vec<(String, Vec<f64>)>,
    history: Vec<f64>,
}

impl CachedCell {
    fn new(fingerprint: &str, cell: &CellResult) -> CachedCell {
        CachedCell {
            fingerprint: fingerprint.to_string(),
            seed: cell.seed,
            scores: cell.scores.iter().map(|(s, v)| (s.code().to_string(), v.clone())).collect(),
            history: cell.history.clone(),
        }
    }
}

fn file_stem(label: &str, plan: &ModelPlan, fold: usize, rerun: usize) -> String {
    let clean = |s: &str| s.replace('+', "_");
    format!("{}__{}__f{fold}_r{rerun}", clean(label), clean(&plan.key))
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::write(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::write(path, e))
}

pub fn history_csv(history: &[f64]) -> String {
    let mut out = String::from("epoch,mean_loss\n");
    for (i, l) in history.iter().enumerate() {
        out.push_str(&format!("{},{l:?}\n", i + 1));
    }
    out
}

struct CellJob<'a> {
    plan_index: usize,
    plan: &'a ModelPlan,
    fold: usize,
    rerun: usize,
    seed: u64,
    fingerprint: String,
    stem: String,
}

fn train_cell(
    job: &CellJob<'_>,
    corpus: &Corpus,
    matrix: &FeatureMatrix,
    train_rows: &[usize],
    test_rows: &[usize],
    config: &TrainConfig,
) -> Result<(CellResult, MtlNetwork)> {
    let tasks = job.plan.task_set.tasks();
    let labels: Vec<f64> = train_rows
        .iter()
        .flat_map(|&r| {
            let l = corpus.locate(r).1.labels;
            tasks.iter().map(move |t| f64::from(u8::from(l.get(*t))))
        })
        .collect();
    let examples = Examples::new(matrix.as_slice(), matrix.n_cols(), train_rows, &labels, tasks.len())
        .map_err(stage("training"))?;
    let net = MtlNetwork::init_keyed(matrix.column_keys(), &job.plan.task_set, config, job.seed)
        .map_err(stage("network initialization"))?;
    let outcome = train(net, &examples, config, job.seed).map_err(stage("training"))?;
    let mut scores = Vec::new();
    for t in &job.plan.evaluates {
        let s = predict(&outcome.network, test_rows.iter().map(|&r| matrix.row(r)), *t).map_err(stage("prediction"))?;
        scores.push((*t, s));
    }
    debug!("cell {} done, final loss {:?}", job.stem, outcome.history.last());
    let cell = CellResult {
        plan: job.plan_index,
        fold: job.fold,
        rerun: job.rerun,
        seed: job.seed,
        scores,
        history: outcome.history,
    };
    Ok((cell, outcome.network))
}

fn load_cached(dir: &Path, job: &CellJob<'_>) -> Option<CellResult> {
    let text = std::fs::read_to_string(dir.join(format!("{}.json", job.stem))).ok()?;
    let cached: CachedCell = serde_json::from_str(&text).ok()?;
    if cached.fingerprint != job.fingerprint || cached.seed != job.seed {
        return None;
    }
    let scores = cached
        .scores
        .into_iter()
        .map(|(code, v)| Some((SourceId::from_code(&code)?, v)))
        .collect::<Option<Vec<_>>>()?;
    Some(CellResult { plan: job.plan_index, fold: job.fold, rerun: job.rerun, seed: job.seed, scores, history: cached.history })
}

fn rows_of(corpus: &Corpus, ids: &[String]) -> Vec<usize> {
    corpus
        .debates()
        .iter()
        .enumerate()
        .filter(|(_, d)| ids.contains(&d.id))
        .flat_map(|(i, _)| corpus.debate_rows(i))
        .collect()
}

pub fn check_spec(inputs: &Inputs, spec: &ExperimentSpec) -> Result<Vec<ModelPlan>> {
    spec.train.validate().map_err(config_error)?;
    if spec.groups.len() == 0 {
        return Err(Error::Config("no feature groups selected".into()));
    }
    inputs.extractor().check_groups(spec.groups).map_err(config_error)?;
    plan_models(spec)
}

/// Runs the full cross-validation grid for `spec`.
pub fn run_experiment(inputs: &Inputs, spec: &ExperimentSpec, opts: &RunOptions) -> Result<ExperimentResult> {
    let plans = check_spec(inputs, spec)?;
    let corpus = &inputs.corpus;
    let folds = make_folds(corpus).map_err(config_error)?;
    let extractor = inputs.extractor();
    let seeds = spec.train.rerun_seeds();
    let label = spec.label();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let input_fp = inputs.fingerprint();
    info!("{label}: {} model(s) x {} fold(s) x {} rerun(s)", plans.len(), folds.len(), seeds.len());

    let mut cells: Vec<CellResult> = Vec::new();
    for (f, fold) in folds.iter().enumerate() {
        let train_rows = rows_of(corpus, &fold.train_debate_ids);
        let test_rows: Vec<usize> = corpus.debate_rows(fold.position).collect();
        let jobs: Vec<CellJob<'_>> = plans
            .iter()
            .enumerate()
            .flat_map(|(p, plan)| seeds.iter().enumerate().map(move |(r, seed)| (p, plan, r, *seed)))
            .map(|(p, plan, r, seed)| CellJob {
                plan_index: p,
                plan,
                fold: f,
                rerun: r,
                seed,
                fingerprint: digest(&[&input_fp, &spec.groups, &spec.train, &plan.task_set, &plan.evaluates, fold, &seed]),
                stem: file_stem(&label, plan, f, r),
            })
            .collect();
        let mut pending = Vec::new();
        for job in &jobs {
            let hit = match (&opts.cell_dir, opts.reuse_cells) {
                (Some(dir), true) => load_cached(dir, job),
                _ => None,
            };
            match hit {
                Some(cell) => {
                    debug!("reusing checkpointed cell {}", job.stem);
                    cells.push(cell);
                }
                None => pending.push(job),
            }
        }
        if pending.is_empty() {
            continue;
        }
        info!("{label}: fold {} (test debate {}), {} cell(s) to train", f + 1, fold.test_debate_id, pending.len());
        let fitted = extractor.fit(&train_rows).map_err(stage("feature fitting"))?;
        let matrix = assemble_matrix(&extractor, spec.groups, &fitted).map_err(stage("feature assembly"))?;
        let trained: Vec<Result<(CellResult, MtlNetwork)>> = pool.install(|| {
            pending
                .par_iter()
                .map(|job| train_cell(job, corpus, &matrix, &train_rows, &test_rows, &spec.train))
                .collect()
        });
        for (job, res) in pending.iter().zip(trained) {
            let (cell, network) = res?;
            if let Some(dir) = &opts.cell_dir {
                let cached = CachedCell::new(&job.fingerprint, &cell);
                let json = serde_json::to_string(&cached).expect("cell serializes");
                write_file(&dir.join(format!("{}.json", job.stem)), json)?;
            }
            if let Some(dir) = &opts.model_dir {
                let path = dir.join(format!("{}.model", job.stem));
                write_file(&path, crate::checkpoint::to_text(&network))?;
            }
            cells.push(cell);
        }
    }
    cells.sort_by_key(|c| (c.plan, c.fold, c.rerun));
    if let Some(dir) = &opts.history_dir {
        for c in &cells {
            let stem = file_stem(&label, &plans[c.plan], c.fold, c.rerun);
            write_file(&dir.join(format!("{stem}.csv")), history_csv(&c.history))?;
        }
    }
    let mut result = ExperimentResult {
        spec: spec.clone(),
        folds,
        plans,
        cells,
        report: MetricReport { variant: label, seeds, rows: Vec::new() },
    };
    result.report.rows = report_rows(&result, corpus);
    Ok(result)
}

fn report_rows(result: &ExperimentResult, corpus: &Corpus) -> Vec<(SourceId, claimrank_core::eval::MetricRow)> {
    let mut rows = Vec::new();
    for target in SourceId::REAL {
        let Some(p) = result.plan_for(target) else { continue };
        let runs: Vec<Vec<RankedDebate>> = (0..result.spec.train.reruns)
            .map(|r| {
                result
                    .folds
                    .iter()
                    .enumerate()
                    .map(|(f, fold)| {
                        let debate = &corpus.debates()[fold.position];
                        let scores = result.cell(p, f, r).scores_for(target).expect("planned target scored");
                        RankedDebate::new(
                            debate.id.clone(),
                            debate.sentences.iter().zip(scores).map(|(s, sc)| (s.index, *sc, s.labels.get(target))),
                        )
                    })
                    .collect()
            })
            .collect();
        rows.push((target, evaluate_source(&runs)));
    }
    rows
}

fn require_multi(base: &ExperimentSpec) -> Result<()> {
    if base.variant != Variant::Multi || base.removed_source.is_some() {
        return Err(Error::Config(format!("ablations start from variant multi, not {}", base.label())));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureAblationRow {
    pub removed: FeatureGroup,
    pub report: MetricReport,
}

/// Sort key placing undefined MAP values last.
fn map_key(report: &MetricReport) -> f64 {
    report.average().map().unwrap_or(f64::INFINITY)
}

/// Re-runs the multi model once per group of `base`, leaving that group out.
/// Rows are sorted by averaged MAP, lowest first.
pub fn feature_ablation(inputs: &Inputs, base: &ExperimentSpec, opts: &RunOptions) -> Result<Vec<FeatureAblationRow>> {
    require_multi(base)?;
    check_spec(inputs, base)?;
    let mut rows = Vec::new();
    for g in base.groups.iter() {
        let spec = ExperimentSpec { groups: base.groups.without(g), ..base.clone() };
        if spec.groups.len() == 0 {
            return Err(Error::Config("feature ablation needs at least two groups".into()));
        }
        info!("feature ablation: without {}", g.name());
        rows.push(FeatureAblationRow { removed: g, report: run_experiment(inputs, &spec, opts)?.report });
    }
    rows.sort_by(|a, b| map_key(&a.report).total_cmp(&map_key(&b.report)));
    Ok(rows)
}

/// MAP differences after removing one source from the multi task set.
#[derive(Clone, Debug, PartialEq)]
pub struct AblationMatrix {
    pub base: MetricReport,
    /// `cells[removed][evaluated]`, both indexed in source order; `None` on
    /// the diagonal and where either MAP is undefined.
    pub cells: [[Option<f64>; 9]; 9],
}

impl AblationMatrix {
    pub fn get(&self, removed: SourceId, evaluated: SourceId) -> Option<f64> {
        self.cells[removed.column()?][evaluated.column()?]
    }

    /// Mean of the defined off-diagonal cells in the row of `removed`.
    pub fn row_mean(&self, removed: SourceId) -> Option<f64> {
        let row = self.cells[removed.column()?];
        let vals: Vec<f64> = row.iter().flatten().copied().collect();
        (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
    }
}

pub fn source_ablation(inputs: &Inputs, base: &ExperimentSpec, opts: &RunOptions) -> Result<AblationMatrix> {
    require_multi(base)?;
    let base = ExperimentSpec { target: Target::All, ..base.clone() };
    let full = run_experiment(inputs, &base, opts)?.report;
    let mut cells = [[None; 9]; 9];
    for (i, removed) in SourceId::REAL.into_iter().enumerate() {
        info!("source ablation: without {removed}");
        let spec = ExperimentSpec { removed_source: Some(removed), ..base.clone() };
        let report = run_experiment(inputs, &spec, opts)?.report;
        for (j, evaluated) in SourceId::REAL.into_iter().enumerate() {
            if i == j {
                continue;
            }
            let without = report.row(evaluated).and_then(|r| r.map());
            let with = full.row(evaluated).and_then(|r| r.map());
            cells[i][j] = without.zip(with).map(|(a, b)| a - b);
        }
    }
    Ok(AblationMatrix { base: full, cells })
}

/// One sentence of the prediction dump.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictionRecord {
    pub debate_id: String,
    pub index: usize,
    pub speaker: String,
    pub text: String,
    /// Fold in which this sentence's debate was the test debate.
    pub fold: usize,
    pub variant: String,
    pub seeds: Vec<u64>,
    pub labels: BTreeMap<String, u8>,
    pub selected_by: usize,
    /// Per evaluated target, one score per rerun.
    pub scores: BTreeMap<String, Vec<f64>>,
}

/// Scores of every sentence while its debate was held out, with its labels.
pub fn dump_predictions(result: &ExperimentResult, corpus: &Corpus) -> Vec<PredictionRecord> {
    let mut out = Vec::with_capacity(corpus.len());
    for (f, fold) in result.folds.iter().enumerate() {
        let debate = &corpus.debates()[fold.position];
        for (k, s) in debate.sentences.iter().enumerate() {
            let mut scores = BTreeMap::new();
            for target in SourceId::REAL {
                let Some(p) = result.plan_for(target) else { continue };
                let per_rerun = (0..result.spec.train.reruns)
                    .map(|r| result.cell(p, f, r).scores_for(target).expect("planned target scored")[k])
                    .collect();
                scores.insert(target.code().to_string(), per_rerun);
            }
            out.push(PredictionRecord {
                debate_id: s.debate_id.clone(),
                index: s.index,
                speaker: s.speaker.clone(),
                text: s.text.clone(),
                fold: f,
                variant: result.report.variant.clone(),
                seeds: result.report.seeds.clone(),
                labels: SourceId::REAL.iter().map(|t| (t.code().to_string(), u8::from(s.labels.get(*t)))).collect(),
                selected_by: s.labels.count(),
                scores,
            });
        }
    }
    out.sort_by_key(|r| corpus.row_of(&r.debate_id, r.index));
    out
}

pub fn predictions_jsonl(records: &[PredictionRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn load_predictions(path: &Path) -> Result<Vec<PredictionRecord>> {
    io::data_lines(&io::read_text(path)?)
        .map(|(line, raw)| {
            serde_json::from_str(raw).map_err(|e| Error::Parse { path: path.to_path_buf(), line, message: e.to_string() })
        })
        .collect()
}

/// Recomputes the metric report from a prediction dump.
pub fn evaluate_predictions(records: &[PredictionRecord]) -> Result<MetricReport> {
    let first = records.first().ok_or_else(|| Error::Config("prediction dump is empty".into()))?;
    if records.iter().any(|r| r.variant != first.variant || r.seeds != first.seeds) {
        return Err(Error::Config("prediction dump mixes runs".into()));
    }
    let reruns = first.seeds.len();
    // debates in first-appearance order
    let mut debates: Vec<(&str, Vec<&PredictionRecord>)> = Vec::new();
    for r in records {
        match debates.iter_mut().find(|(id, _)| *id == r.debate_id) {
            Some((_, v)) => v.push(r),
            None => debates.push((&r.debate_id, vec![r])),
        }
    }
    let mut rows = Vec::new();
    for target in SourceId::REAL {
        let code = target.code();
        if !first.scores.contains_key(code) {
            continue;
        }
        let mut runs = Vec::with_capacity(reruns);
        for r in 0..reruns {
            let mut ranked = Vec::new();
            for (id, recs) in &debates {
                let mut items = Vec::with_capacity(recs.len());
                for rec in recs {
                    let score = rec
                        .scores
                        .get(code)
                        .and_then(|v| v.get(r))
                        .ok_or_else(|| Error::Config(format!("({}, {}) lacks a {code} score for rerun {r}", rec.debate_id, rec.index)))?;
                    let relevant = rec.labels.get(code).copied().unwrap_or(0) == 1;
                    items.push((rec.index, *score, relevant));
                }
                ranked.push(RankedDebate::new(*id, items));
            }
            runs.push(ranked);
        }
        rows.push((target, evaluate_source(&runs)));
    }
    Ok(MetricReport { variant: first.variant.clone(), seeds: first.seeds.clone(), rows })
}

/// Feature matrix of one fold, for inspection.
pub fn featurize_fold(inputs: &Inputs, groups: GroupSet, fold: usize) -> Result<(Fold, FeatureMatrix)> {
    let folds = make_folds(&inputs.corpus).map_err(config_error)?;
    let fold = folds
        .get(fold)
        .cloned()
        .ok_or_else(|| Error::Config(format!("fold {fold} out of range (corpus has {} folds)", folds.len())))?;
    let extractor = inputs.extractor();
    extractor.check_groups(groups).map_err(config_error)?;
    let fitted = extractor.fit(&rows_of(&inputs.corpus, &fold.train_debate_ids)).map_err(stage("feature fitting"))?;
    let matrix = assemble_matrix(&extractor, groups, &fitted).map_err(stage("feature assembly"))?;
    Ok((fold, matrix))
}
