//! Experiment configuration files (TOML) and command-line overrides.
//!
//! Precedence, lowest first: built-in defaults, the config file, flags.
//! Relative paths in a config file are resolved against the file's
//! directory; relative paths given as flags against the working directory.

use std::path::{Path, PathBuf};

use claimrank_core::features::{
    Candidate, FeatureConfig, FeatureGroup, GroupSet, LexiconKind, SpeakerRoles, VocabConfig,
};
use claimrank_core::model::{TrainConfig, Variant};
use claimrank_core::SourceId;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::experiment::{ExperimentSpec, Target};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    name: Option<String>,
    #[serde(default)]
    paths: PathsSection,
    #[serde(default)]
    experiment: ExperimentSection,
    #[serde(default)]
    train: TrainSection,
    #[serde(default)]
    seeds: SeedsSection,
    #[serde(default)]
    features: FeaturesSection,
    speakers: Option<SpeakersSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathsSection {
    corpus: Option<PathBuf>,
    sidecar: Option<PathBuf>,
    output: Option<PathBuf>,
    #[serde(default)]
    lexicons: Vec<LexiconEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LexiconEntry {
    kind: String,
    path: PathBuf,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentSection {
    variant: Option<String>,
    target: Option<String>,
    groups: Option<Vec<String>>,
    #[serde(default)]
    exclude_groups: Vec<String>,
    jobs: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrainSection {
    epochs: Option<usize>,
    learning_rate: Option<f64>,
    momentum: Option<f64>,
    batch_size: Option<usize>,
    shared_hidden: Option<usize>,
    task_hidden: Option<usize>,
    positive_weight: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeedsSection {
    master: Option<u64>,
    reruns: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FeaturesSection {
    min_df: Option<usize>,
    lowercase: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpeakersSection {
    #[serde(default)]
    candidates: Vec<CandidateEntry>,
    #[serde(default)]
    moderators: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CandidateEntry {
    name: String,
    #[serde(default)]
    aliases: Vec<String>,
}

/// Values given on the command line; `None` leaves the config value alone.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub corpus: Option<PathBuf>,
    pub sidecar: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub name: Option<String>,
    pub variant: Option<String>,
    pub target: Option<String>,
    pub epochs: Option<usize>,
    pub seed: Option<u64>,
    pub reruns: Option<usize>,
    pub jobs: Option<usize>,
}

/// A fully resolved experiment configuration.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub corpus: PathBuf,
    pub sidecar: Option<PathBuf>,
    pub lexicons: Vec<(LexiconKind, PathBuf)>,
    /// Root output directory; results go to `output/<name>/`.
    pub output: PathBuf,
    pub spec: ExperimentSpec,
    pub features: FeatureConfig,
    pub jobs: usize,
}

impl ExperimentConfig {
    pub fn out_dir(&self) -> PathBuf {
        self.output.join(&self.spec.name)
    }
}

pub fn parse_target(s: &str) -> Result<Target> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(Target::All);
    }
    match SourceId::from_code(s) {
        Some(src) if src.is_real() => Ok(Target::Source(src)),
        _ => Err(Error::Config(format!("unknown target {s:?}; expected ALL or one of CT ABC CNN WP NPR PF TG NYT FC"))),
    }
}

pub fn parse_group(s: &str) -> Result<FeatureGroup> {
    FeatureGroup::from_name(s).ok_or_else(|| Error::Config(format!("unknown feature group {s:?}")))
}

fn resolve(base: &Path, p: PathBuf) -> PathBuf {
    if p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

/// Loads `path` (when given) and applies `flags` on top.
pub fn load(path: Option<&Path>, flags: &Overrides) -> Result<ExperimentConfig> {
    let (file, base) = match path {
        Some(p) => {
            let text = crate::io::read_text(p)?;
            let file: File = toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {}", p.display(), e.message())))?;
            (file, p.parent().map(Path::to_path_buf).unwrap_or_default())
        }
        None => (File::default(), PathBuf::new()),
    };
    build(file, &base, flags)
}

/// Parses config text as if it were read from a file in `base`.
pub fn from_str(text: &str, base: &Path, flags: &Overrides) -> Result<ExperimentConfig> {
    let file: File = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
    build(file, base, flags)
}

fn build(file: File, base: &Path, flags: &Overrides) -> Result<ExperimentConfig> {
    let corpus = flags
        .corpus
        .clone()
        .or_else(|| file.paths.corpus.map(|p| resolve(base, p)))
        .ok_or_else(|| Error::Config("no corpus path (set paths.corpus or --corpus)".into()))?;
    let sidecar = flags.sidecar.clone().or_else(|| file.paths.sidecar.map(|p| resolve(base, p)));
    let output = flags
        .output
        .clone()
        .or_else(|| file.paths.output.map(|p| resolve(base, p)))
        .unwrap_or_else(|| PathBuf::from("out"));
    let lexicons = file
        .paths
        .lexicons
        .into_iter()
        .map(|l| {
            let kind = LexiconKind::from_name(&l.kind)
                .ok_or_else(|| Error::Config(format!("unknown lexicon kind {:?}", l.kind)))?;
            Ok((kind, resolve(base, l.path)))
        })
        .collect::<Result<Vec<_>>>()?;

    let exp = file.experiment;
    let variant: Variant = flags
        .variant
        .as_deref()
        .or(exp.variant.as_deref())
        .unwrap_or("multi")
        .parse()
        .map_err(|e: claimrank_core::Error| Error::Config(e.to_string()))?;
    let target = parse_target(flags.target.as_deref().or(exp.target.as_deref()).unwrap_or("ALL"))?;
    let mut groups = match exp.groups {
        None => GroupSet::all(),
        Some(names) if names.len() == 1 && names[0].eq_ignore_ascii_case("all") => GroupSet::all(),
        Some(names) => names.iter().map(|n| parse_group(n)).collect::<Result<GroupSet>>()?,
    };
    for n in &exp.exclude_groups {
        groups = groups.without(parse_group(n)?);
    }
    if groups.len() == 0 {
        return Err(Error::Config("no feature groups selected".into()));
    }

    let d = TrainConfig::default();
    let t = file.train;
    let train = TrainConfig {
        epochs: flags.epochs.or(t.epochs).unwrap_or(d.epochs),
        learning_rate: t.learning_rate.unwrap_or(d.learning_rate),
        momentum: t.momentum.unwrap_or(d.momentum),
        batch_size: t.batch_size.unwrap_or(d.batch_size),
        seed: flags.seed.or(file.seeds.master).unwrap_or(d.seed),
        reruns: flags.reruns.or(file.seeds.reruns).unwrap_or(d.reruns),
        shared_hidden: t.shared_hidden.unwrap_or(d.shared_hidden),
        task_hidden: t.task_hidden.unwrap_or(d.task_hidden),
        positive_weight: t.positive_weight.unwrap_or(d.positive_weight),
    };
    train.validate().map_err(|e| Error::Config(e.to_string()))?;

    let vd = VocabConfig::default();
    let features = FeatureConfig {
        vocab: VocabConfig {
            lowercase: file.features.lowercase.unwrap_or(vd.lowercase),
            min_df: file.features.min_df.unwrap_or(vd.min_df),
        },
        roles: match file.speakers {
            None => SpeakerRoles::us_2016(),
            Some(s) => SpeakerRoles {
                candidates: s
                    .candidates
                    .into_iter()
                    .map(|c| Candidate { name: c.name, aliases: c.aliases })
                    .collect(),
                moderators: s.moderators,
            },
        },
    };
    let name = flags
        .name
        .clone()
        .or(file.name)
        .unwrap_or_else(|| variant.name().replace('+', "_"));
    if name.is_empty() || name.contains(['/', '\\']) || name == "." || name == ".." {
        return Err(Error::Config(format!("experiment name {name:?} is not a plain directory name")));
    }
    let jobs = flags.jobs.or(exp.jobs).unwrap_or(1).max(1);
    let spec = ExperimentSpec::new(name, variant, target, groups, train);
    Ok(ExperimentConfig { corpus, sidecar, lexicons, output, spec, features, jobs })
}
