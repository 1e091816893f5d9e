use claimrank::experiment::{
    check_spec, dump_predictions, evaluate_predictions, feature_ablation, load_predictions, plan_models,
    predictions_jsonl, run_experiment, ExperimentSpec, Inputs, RunOptions, Target,
};
use claimrank::synth::{generate, SynthConfig, EXCERPT_CLAIM};
use claimrank::Error;
use claimrank_core::features::{AnnotationStore, FeatureConfig, FeatureGroup, GroupSet};
use claimrank_core::model::{TrainConfig, Variant};
use claimrank_core::SourceId;

fn inputs(cfg: &SynthConfig) -> Inputs {
    let (corpus, records) = generate(cfg);
    let annotations = Some(AnnotationStore::build(&corpus, records).unwrap());
    Inputs { corpus, annotations, lexicons: Vec::new(), features: FeatureConfig::default() }
}

fn small() -> SynthConfig {
    SynthConfig { debates: 3, sentences_per_debate: 30, ..SynthConfig::default() }
}

fn spec(variant: Variant, epochs: usize, reruns: usize) -> ExperimentSpec {
    let train = TrainConfig { epochs, reruns, shared_hidden: 8, task_hidden: 3, ..TrainConfig::default() };
    ExperimentSpec::new("t", variant, Target::All, GroupSet::all(), train)
}

#[test]
fn dump_covers_corpus_and_reevaluates_to_the_same_report() {
    let inputs = inputs(&small());
    let result = run_experiment(&inputs, &spec(Variant::Multi, 3, 2), &RunOptions::default()).unwrap();
    let dump = dump_predictions(&result, &inputs.corpus);
    assert_eq!(dump.len(), inputs.corpus.len());
    for rec in &dump {
        assert_eq!(rec.scores.len(), 9);
        assert!(rec.scores.values().flatten().all(|p| *p > 0.0 && *p < 1.0));
        assert!(rec.scores.values().all(|v| v.len() == 2));
    }
    let excerpt = dump.iter().find(|r| r.text == EXCERPT_CLAIM).unwrap();
    assert_eq!((excerpt.debate_id.as_str(), excerpt.index, excerpt.selected_by), ("debate1", 5, 6));
    assert_eq!(evaluate_predictions(&dump).unwrap(), result.report);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("predictions.jsonl");
    std::fs::write(&path, predictions_jsonl(&dump)).unwrap();
    assert_eq!(load_predictions(&path).unwrap(), dump);
}

#[test]
fn singleton_trains_one_model_per_source() {
    let s = spec(Variant::Singleton, 2, 1);
    let plans = plan_models(&s).unwrap();
    assert_eq!(plans.len(), 9);
    assert!(plans.iter().all(|p| p.evaluates.len() == 1));
    let only = ExperimentSpec { target: Target::Source(SourceId::Nyt), ..s };
    let inputs = inputs(&small());
    let result = run_experiment(&inputs, &only, &RunOptions::default()).unwrap();
    assert_eq!(result.report.rows.len(), 1);
    assert_eq!(result.report.rows[0].0, SourceId::Nyt);
}

#[test]
fn source_removal_drops_one_head_and_needs_multi() {
    let s = ExperimentSpec { removed_source: Some(SourceId::Cnn), ..spec(Variant::Multi, 2, 1) };
    let plans = plan_models(&s).unwrap();
    assert_eq!(plans.len(), 1);
    assert_eq!(plans[0].evaluates.len(), 8);
    assert!(!plans[0].evaluates.contains(&SourceId::Cnn));
    let bad = ExperimentSpec { variant: Variant::Singleton, ..s };
    assert!(matches!(plan_models(&bad), Err(Error::Config(_))));
}

#[test]
fn missing_sidecar_fails_before_training() {
    let mut inputs = inputs(&small());
    inputs.annotations = None;
    let err = check_spec(&inputs, &spec(Variant::Multi, 2, 1)).unwrap_err();
    assert!(matches!(err, Error::Config(_)), "{err}");
    let text_only = GroupSet::all().without(FeatureGroup::Embeddings);
    assert!(check_spec(&inputs, &ExperimentSpec { groups: text_only, ..spec(Variant::Multi, 2, 1) }).is_err());
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let inputs = inputs(&small());
    let s = spec(Variant::Singleton, 2, 2);
    let one = run_experiment(&inputs, &s, &RunOptions { jobs: 1, ..RunOptions::default() }).unwrap();
    let three = run_experiment(&inputs, &s, &RunOptions { jobs: 3, ..RunOptions::default() }).unwrap();
    assert_eq!(one.cells, three.cells);
    assert_eq!(one.report, three.report);
}

#[test]
fn cached_cells_are_reused_and_keyed_by_inputs() {
    let inputs = inputs(&small());
    let dir = tempfile::tempdir().unwrap();
    let opts = RunOptions { cell_dir: Some(dir.path().to_path_buf()), ..RunOptions::default() };
    let s = spec(Variant::Multi, 3, 2);
    let first = run_experiment(&inputs, &s, &opts).unwrap();
    let files = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(files, 3 * 2);
    let again = run_experiment(&inputs, &s, &opts).unwrap();
    assert_eq!(first.cells, again.cells);

    // a different corpus under the same cell names must not hit the cache
    let other = self::inputs(&SynthConfig { seed: 99, ..small() });
    let fresh = run_experiment(&other, &s, &RunOptions::default()).unwrap();
    let cached = run_experiment(&other, &s, &opts).unwrap();
    assert_eq!(fresh.cells, cached.cells);
}

#[test]
fn feature_ablation_covers_every_group_and_an_empty_group_barely_matters() {
    let inputs = inputs(&SynthConfig { constant_topics: true, ..small() });
    let s = spec(Variant::Multi, 3, 1);
    let rows = feature_ablation(&inputs, &s, &RunOptions::default()).unwrap();
    assert_eq!(rows.len(), 12);
    let maps: Vec<f64> = rows.iter().map(|r| r.report.average().map().unwrap()).collect();
    assert!(maps.windows(2).all(|w| w[0] <= w[1]));
    let full = run_experiment(&inputs, &s, &RunOptions::default()).unwrap().report.average().map().unwrap();
    let no_topics = rows.iter().find(|r| r.removed == FeatureGroup::Topics).unwrap();
    // fan-in shrinks, so the Glorot bound moves a little; the columns themselves carry nothing
    let diff = (no_topics.report.average().map().unwrap() - full).abs();
    assert!(diff < 0.01, "removing constant topics moved MAP by {diff}");
}

#[test]
fn ablation_rejects_non_multi_variants() {
    let inputs = inputs(&small());
    assert!(feature_ablation(&inputs, &spec(Variant::Any, 1, 1), &RunOptions::default()).is_err());
}
