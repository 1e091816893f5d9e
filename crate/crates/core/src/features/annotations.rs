//! Sidecar linguistic annotations produced offline by an external annotator.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::math;

/// Coarse part-of-speech tag set carried in `pos_counts`.
pub const POS_TAGS: [&str; 12] =
    ["NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "NUM", "CONJ", "PRT", "PUNCT", "X"];

pub const NER_CLASSES: [&str; 4] = ["PER", "ORG", "LOC", "MISC"];

pub const TOPIC_SUM_TOLERANCE: f64 = 1e-6;

macro_rules! relations {
    ($($variant:ident => $label:literal),* $(,)?) => {
        /// Closed set of discourse relations to a neighbouring sentence.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum DiscourseRelation {
            $($variant),*
        }

        impl DiscourseRelation {
            pub const ALL: &'static [DiscourseRelation] = &[$(DiscourseRelation::$variant),*];

            pub const fn label(self) -> &'static str {
                match self {
                    $(DiscourseRelation::$variant => $label),*
                }
            }
        }
    };
}

relations! {
    None => "none",
    Attribution => "attribution",
    Background => "background",
    Cause => "cause",
    Comparison => "comparison",
    Condition => "condition",
    Contrast => "contrast",
    Elaboration => "elaboration",
    Enablement => "enablement",
    Evaluation => "evaluation",
    Explanation => "explanation",
    Joint => "joint",
    MannerMeans => "manner-means",
    SameUnit => "same-unit",
    Summary => "summary",
    Temporal => "temporal",
    TextualOrganization => "textual-organization",
    TopicChange => "topic-change",
    TopicComment => "topic-comment",
}

impl DiscourseRelation {
    pub fn from_label(label: &str) -> Option<DiscourseRelation> {
        DiscourseRelation::ALL
            .iter()
            .copied()
            .find(|r| r.label().eq_ignore_ascii_case(label.trim()))
    }

    pub fn ordinal(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Annotation {
    /// Counts in [`POS_TAGS`] order.
    pub pos_counts: [u32; 12],
    /// Flags in [`NER_CLASSES`] order.
    pub ner_flags: [bool; 4],
    pub ner_count: u32,
    /// In `[-1, 1]`.
    pub sentiment: f64,
    /// Topic distribution, sums to 1.
    pub topics: Vec<f64>,
    /// Mean token embedding.
    pub embedding: Vec<f64>,
    pub discourse_prev: DiscourseRelation,
    pub discourse_next: DiscourseRelation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnotationRecord {
    pub debate_id: String,
    pub index: usize,
    pub annotation: Annotation,
}

/// Annotations aligned with corpus rows; covers every sentence exactly once.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnotationStore {
    rows: Vec<Annotation>,
    topic_dim: usize,
    embedding_dim: usize,
}

impl AnnotationStore {
    pub fn build<I>(corpus: &Corpus, records: I) -> Result<AnnotationStore>
    where
        I: IntoIterator<Item = AnnotationRecord>,
    {
        let mut slots: Vec<Option<Annotation>> = vec![None; corpus.len()];
        let mut dims: Option<(usize, usize)> = None;
        for rec in records {
            let invalid = |reason: String| Error::InvalidAnnotation {
                debate_id: rec.debate_id.clone(),
                index: rec.index,
                reason,
            };
            let a = &rec.annotation;
            let (k, d) = *dims.get_or_insert((a.topics.len(), a.embedding.len()));
            if a.topics.len() != k {
                return Err(invalid(format!("topic vector has length {}, expected {k}", a.topics.len())));
            }
            if a.embedding.len() != d {
                return Err(invalid(format!(
                    "embedding has length {}, expected {d}",
                    a.embedding.len()
                )));
            }
            if a.topics.iter().chain(&a.embedding).any(|x| !x.is_finite()) || !a.sentiment.is_finite() {
                return Err(invalid("non-finite value".into()));
            }
            if a.topics.iter().any(|p| *p < 0.0) {
                return Err(invalid("negative topic probability".into()));
            }
            let sum: f64 = a.topics.iter().sum();
            if k > 0 && math::abs(sum - 1.0) > TOPIC_SUM_TOLERANCE {
                return Err(invalid(format!("topic vector sums to {sum}")));
            }
            if !(-1.0..=1.0).contains(&a.sentiment) {
                return Err(invalid(format!("sentiment {} outside [-1, 1]", a.sentiment)));
            }
            let row = corpus.row_of(&rec.debate_id, rec.index).ok_or_else(|| {
                Error::UnexpectedAnnotation {
                    debate_id: rec.debate_id.clone(),
                    index: rec.index,
                    reason: "no such sentence in corpus".into(),
                }
            })?;
            if slots[row].is_some() {
                return Err(Error::UnexpectedAnnotation {
                    debate_id: rec.debate_id,
                    index: rec.index,
                    reason: "duplicate annotation".into(),
                });
            }
            slots[row] = Some(rec.annotation);
        }
        let missing: Vec<(String, usize)> = slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_none())
            .map(|(row, _)| {
                let (_, s) = corpus.locate(row);
                (s.debate_id.clone(), s.index)
            })
            .collect();
        if !missing.is_empty() {
            return Err(Error::MissingAnnotations(missing));
        }
        let (topic_dim, embedding_dim) = dims.unwrap_or((0, 0));
        Ok(AnnotationStore {
            rows: slots.into_iter().map(|s| s.expect("coverage checked")).collect(),
            topic_dim,
            embedding_dim,
        })
    }

    /// Annotation of global corpus row `row`.
    pub fn get(&self, row: usize) -> &Annotation {
        &self.rows[row]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn topic_dim(&self) -> usize {
        self.topic_dim
    }

    pub fn embedding_dim(&self) -> usize {
        self.embedding_dim
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tests::sentence;

    fn corpus() -> Corpus {
        Corpus::from_sentences(vec![
            sentence("d1", 0, "A", "One.", [0; 9]),
            sentence("d1", 1, "B", "Two.", [0; 9]),
        ])
        .unwrap()
    }

    fn annotation(topics: Vec<f64>) -> Annotation {
        Annotation {
            pos_counts: [0; 12],
            ner_flags: [false; 4],
            ner_count: 0,
            sentiment: 0.0,
            topics,
            embedding: vec![0.1, 0.2],
            discourse_prev: DiscourseRelation::None,
            discourse_next: DiscourseRelation::Elaboration,
        }
    }

    fn record(d: &str, i: usize, topics: Vec<f64>) -> AnnotationRecord {
        AnnotationRecord { debate_id: d.into(), index: i, annotation: annotation(topics) }
    }

    #[test]
    fn full_coverage_builds() {
        let store = AnnotationStore::build(
            &corpus(),
            vec![record("d1", 1, vec![0.5, 0.5]), record("d1", 0, vec![1.0, 0.0])],
        )
        .unwrap();
        assert_eq!(store.len(), 2);
        assert_eq!(store.get(0).topics, vec![1.0, 0.0]);
        assert_eq!(store.embedding_dim(), 2);
    }

    #[test]
    fn missing_sentence_is_named() {
        let err = AnnotationStore::build(&corpus(), vec![record("d1", 0, vec![1.0])]).unwrap_err();
        assert_eq!(err, Error::MissingAnnotations(vec![("d1".into(), 1)]));
    }

    #[test]
    fn unnormalized_topics_are_rejected() {
        let err = AnnotationStore::build(&corpus(), vec![record("d1", 0, vec![0.5, 0.4, 0.2])]).unwrap_err();
        assert!(matches!(err, Error::InvalidAnnotation { index: 0, .. }), "{err:?}");
    }

    #[test]
    fn embedding_length_must_be_uniform() {
        let mut r = record("d1", 1, vec![1.0]);
        r.annotation.embedding.push(0.3);
        let err = AnnotationStore::build(&corpus(), vec![record("d1", 0, vec![1.0]), r]).unwrap_err();
        assert!(matches!(err, Error::InvalidAnnotation { index: 1, .. }));
    }

    #[test]
    fn duplicates_and_strangers_are_rejected() {
        let dup = AnnotationStore::build(&corpus(), vec![record("d1", 0, vec![1.0]), record("d1", 0, vec![1.0])]);
        assert!(matches!(dup, Err(Error::UnexpectedAnnotation { .. })));
        let stranger = AnnotationStore::build(&corpus(), vec![record("d9", 0, vec![1.0])]);
        assert!(matches!(stranger, Err(Error::UnexpectedAnnotation { .. })));
    }

    #[test]
    fn relation_labels_round_trip() {
        assert_eq!(DiscourseRelation::ALL.len(), 19);
        for r in DiscourseRelation::ALL {
            assert_eq!(DiscourseRelation::from_label(r.label()), Some(*r));
            assert_eq!(DiscourseRelation::ALL[r.ordinal()], *r);
        }
    }
}
