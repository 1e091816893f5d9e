//! Seeded synthetic debates with sidecar annotations, for tests, fixtures
//! and smoke runs.
//!
//! Sentences are either factual claims (numbers, dates, named actors) or
//! conversational filler. Each claim has a hidden strength; each source picks
//! claims with probability rising in that strength at its own rate, so the
//! label columns overlap only partly. The embedding of a claim leans towards
//! a fixed direction in proportion to its strength, which gives the network a
//! learnable signal.

use claimrank_core::features::{Annotation, AnnotationRecord, DiscourseRelation, POS_TAGS};
use claimrank_core::text::tokenize;
use claimrank_core::{Corpus, Labels, Sentence, SourceId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct SynthConfig {
    pub debates: usize,
    pub sentences_per_debate: usize,
    pub topic_dim: usize,
    pub embedding_dim: usize,
    pub seed: u64,
    /// Copy one label draw into all nine columns.
    pub identical_labels: bool,
    /// Give every sentence the same topic vector, so the Topics group carries nothing.
    pub constant_topics: bool,
    /// Open the first debate with the eight-sentence excerpt of the first 2016 debate.
    pub include_excerpt: bool,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            debates: 4,
            sentences_per_debate: 60,
            topic_dim: 5,
            embedding_dim: 8,
            seed: 7,
            identical_labels: false,
            constant_topics: false,
            include_excerpt: true,
        }
    }
}

/// Per-source selection rate for claims.
const RATES: [f64; 9] = [0.30, 0.45, 0.40, 0.35, 0.25, 0.55, 0.20, 0.15, 0.50];

/// Speaker, CT ABC CNN WP NPR PF TG NYT FC, text.
pub const EXCERPT: [(&str, [u8; 9], &str); 8] = [
    ("CLINTON", [0, 0, 0, 0, 0, 0, 0, 0, 0], "So we're now on the precipice of having a potentially much better economy, but the last thing we need to do is to go back to the policies that failed us in the first place."),
    ("CLINTON", [1, 1, 0, 0, 1, 1, 0, 1, 1], "Independent experts have looked at what I've proposed and looked at what Donald's proposed, and basically they've said this, that if his tax plan, which would blow up the debt by over $5 trillion and would in some instances disadvantage middle-class families compared to the wealthy, were to go into effect, we would lose 3.5 million jobs and maybe have another recession."),
    ("CLINTON", [1, 0, 0, 0, 0, 0, 0, 0, 0], "They've looked at my plans and they've said, OK, if we can do this, and I intend to get it done, we will have 10 million more new jobs, because we will be making investments where we can grow the economy."),
    ("CLINTON", [0, 0, 0, 0, 0, 0, 0, 0, 0], "Take clean energy."),
    ("CLINTON", [0, 0, 0, 0, 0, 0, 0, 0, 0], "Some country is going to be the clean- energy superpower of the 21st century."),
    ("CLINTON", [1, 1, 1, 1, 0, 0, 1, 0, 1], "Donald thinks that climate change is a hoax perpetrated by the Chinese."),
    ("CLINTON", [0, 0, 0, 0, 0, 0, 0, 0, 0], "I think it's real."),
    ("TRUMP", [1, 1, 0, 1, 1, 1, 0, 0, 0], "I did not."),
];

pub const EXCERPT_CLAIM: &str = "Donald thinks that climate change is a hoax perpetrated by the Chinese.";

const ACTORS: [&str; 6] = ["Donald", "Hillary", "China", "Mexico", "the Fed", "NAFTA"];
const THEMES: [&str; 8] = ["taxes", "jobs", "the debt", "trade", "crime", "energy", "health care", "wages"];
const VERBS: [&str; 5] = ["rose by", "fell by", "cost us", "added", "lost"];
const UNITS: [&str; 4] = ["million jobs", "billion dollars", "percent", "trillion dollars"];
const FILLER: [&str; 12] = [
    "Thank you.",
    "Let me say this.",
    "I think that is right.",
    "We have to do better.",
    "That is not what I said.",
    "Please, go ahead.",
    "We will get to that.",
    "Look at my website.",
    "I agree with that.",
    "Believe me.",
    "It is time to move on.",
    "Let me respond.",
];

fn claim_text(rng: &mut ChaCha8Rng) -> String {
    let actor = ACTORS.choose(rng).unwrap();
    let theme = THEMES.choose(rng).unwrap();
    let verb = VERBS.choose(rng).unwrap();
    let unit = UNITS.choose(rng).unwrap();
    let n = rng.gen_range(2..95);
    let year = rng.gen_range(1990..2017);
    match rng.gen_range(0..3) {
        0 => format!("Under {actor}, {theme} {verb} {n} {unit} in {year}."),
        1 => format!("{actor} never paid for {theme}, and it {verb} {n} {unit}."),
        _ => format!("Since {year} {theme} {verb} {n} {unit}, not {} as {actor} claims.", n + 3),
    }
}

fn filler_text(rng: &mut ChaCha8Rng) -> String {
    let a = FILLER.choose(rng).unwrap();
    if rng.gen_bool(0.3) {
        format!("{a} {}", FILLER.choose(rng).unwrap())
    } else {
        a.to_string()
    }
}

fn annotate(
    rng: &mut ChaCha8Rng,
    cfg: &SynthConfig,
    text: &str,
    strength: Option<f64>,
    direction: &[f64],
) -> Annotation {
    let claim = strength.is_some();
    let tokens = tokenize(text);
    let mut pos_counts = [0u32; 12];
    for t in &tokens {
        let tag = if t.chars().all(|c| c.is_ascii_digit()) {
            "NUM"
        } else if t.len() > 5 {
            "NOUN"
        } else if t.len() > 3 {
            "VERB"
        } else {
            "DET"
        };
        pos_counts[POS_TAGS.iter().position(|p| *p == tag).unwrap()] += 1;
    }
    pos_counts[10] = text.chars().filter(|c| c.is_ascii_punctuation()).count() as u32;
    let per = ["donald", "hillary", "clinton", "trump"].iter().any(|n| tokens.iter().any(|t| t == n));
    let loc = ["china", "mexico", "chinese"].iter().any(|n| tokens.iter().any(|t| t == n));
    let org = tokens.iter().any(|t| t == "fed" || t == "nafta");
    let ner_flags = [per, org, loc, false];
    let topics = if cfg.constant_topics {
        vec![1.0 / cfg.topic_dim as f64; cfg.topic_dim]
    } else {
        let raw: Vec<f64> = (0..cfg.topic_dim).map(|_| rng.gen_range(0.05..1.0)).collect();
        let sum: f64 = raw.iter().sum();
        raw.iter().map(|x| x / sum).collect()
    };
    let lean = strength.map_or(-0.4, |s| s - 0.3);
    let embedding = direction.iter().map(|d| lean * d + rng.gen_range(-0.6..0.6)).collect();
    let relation = |rng: &mut ChaCha8Rng| *DiscourseRelation::ALL.choose(rng).unwrap();
    Annotation {
        pos_counts,
        ner_count: ner_flags.iter().filter(|f| **f).count() as u32,
        ner_flags,
        sentiment: if claim { rng.gen_range(-0.8..0.2) } else { rng.gen_range(-0.3..0.6) },
        topics,
        embedding,
        discourse_prev: relation(rng),
        discourse_next: relation(rng),
    }
}

/// Builds a corpus and one sidecar record per sentence.
pub fn generate(cfg: &SynthConfig) -> (Corpus, Vec<AnnotationRecord>) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let direction: Vec<f64> = (0..cfg.embedding_dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut sentences = Vec::new();
    let mut records = Vec::new();
    for d in 0..cfg.debates {
        let debate_id = format!("debate{}", d + 1);
        let mut rows: Vec<(String, Labels, String, Option<f64>)> = Vec::new();
        if d == 0 && cfg.include_excerpt {
            for (speaker, flags, text) in EXCERPT {
                let labels = Labels::from_flags(flags.map(|f| f == 1));
                let strength = labels.any().then_some(0.5 + labels.count() as f64 / 9.0);
                rows.push((speaker.to_string(), labels, text.to_string(), strength));
            }
        }
        let mut speaker = 0usize;
        while rows.len() < cfg.sentences_per_debate {
            speaker = (speaker + rng.gen_range(1..3)) % 3;
            let name = ["HOLT", "CLINTON", "TRUMP"][speaker];
            let run = if speaker == 0 { rng.gen_range(1..3) } else { rng.gen_range(1..6) };
            for _ in 0..run {
                if rows.len() == cfg.sentences_per_debate {
                    break;
                }
                let claim = speaker != 0 && rng.gen_bool(0.3);
                let text = if claim { claim_text(&mut rng) } else { filler_text(&mut rng) };
                let mut labels = Labels::default();
                let strength = claim.then(|| rng.gen_range(0.3..1.7));
                if let Some(strength) = strength {
                    for (src, rate) in SourceId::REAL.iter().zip(RATES) {
                        let pick = if cfg.identical_labels { strength > 1.0 } else { rng.gen_bool((rate * strength).min(1.0)) };
                        labels.set(*src, pick);
                    }
                }
                rows.push((name.to_string(), labels, text, strength));
            }
        }
        for (index, (speaker, labels, text, strength)) in rows.into_iter().enumerate() {
            let annotation = annotate(&mut rng, cfg, &text, strength, &direction);
            records.push(AnnotationRecord { debate_id: debate_id.clone(), index, annotation });
            sentences.push(Sentence { debate_id: debate_id.clone(), index, speaker, text, labels });
        }
    }
    let corpus = Corpus::from_sentences(sentences).expect("generated corpus is well formed");
    (corpus, records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use claimrank_core::features::AnnotationStore;

    #[test]
    fn generated_data_is_valid_and_seeded() {
        let cfg = SynthConfig::default();
        let (corpus, records) = generate(&cfg);
        assert_eq!(corpus.debates().len(), 4);
        assert_eq!(corpus.len(), 240);
        let store = AnnotationStore::build(&corpus, records.clone()).unwrap();
        assert_eq!((store.topic_dim(), store.embedding_dim()), (5, 8));
        assert_eq!(generate(&cfg), (corpus.clone(), records));
        let other = generate(&SynthConfig { seed: 8, ..cfg });
        assert_ne!(other.0, corpus);
    }

    #[test]
    fn excerpt_opens_the_first_debate() {
        let (corpus, _) = generate(&SynthConfig::default());
        let s = &corpus.debates()[0].sentences[5];
        assert_eq!(s.text, EXCERPT_CLAIM);
        assert_eq!(s.labels.count(), 6);
        assert_eq!(corpus.debates()[0].sentences[7].labels.count(), 5);
    }

    #[test]
    fn identical_columns() {
        let (corpus, _) = generate(&SynthConfig { identical_labels: true, include_excerpt: false, ..SynthConfig::default() });
        assert!(corpus.sentences().all(|s| s.labels.count() == 0 || s.labels.count() == 9));
        assert!(corpus.sentences().any(|s| s.labels.count() == 9));
    }
}
