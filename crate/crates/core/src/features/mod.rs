//! Per-sentence feature extraction and matrix assembly.
//!
//! Features are organised in twelve named groups so that whole groups can be
//! removed for ablation. Text-derived groups are computed here; model-derived
//! annotations (POS, NER, sentiment, topics, embeddings, discourse) arrive
//! through an [`AnnotationStore`].

mod annotations;
mod contradiction;
mod lexicon;
mod matrix;
mod similarity;
mod structural;
mod vocab;

use core::fmt;

pub use annotations::{
    Annotation, AnnotationRecord, AnnotationStore, DiscourseRelation, NER_CLASSES, POS_TAGS,
    TOPIC_SUM_TOLERANCE,
};
pub use contradiction::{contradiction_features, ContradictionCounts};
pub use lexicon::{lexicon_features, Lexicon, LexiconKind};
pub use matrix::{
    assemble_matrix, ColumnScale, FeatureConfig, FeatureExtractor, FeatureMatrix, FittedFeatures,
};
pub use similarity::{cosine_similarity, sim_to_checked};
pub use structural::{structural_features, Candidate, DebateLayout, SpeakerRole, SpeakerRoles, Structural};
pub use vocab::{build_vocabulary, tfidf_vector, VocabConfig, Vocabulary};

/// The twelve ablatable feature groups, in canonical column order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FeatureGroup {
    Embeddings,
    Metadata,
    Sentiment,
    Topics,
    Discourse,
    Ner,
    SegmentSize,
    Position,
    Linguistic,
    Contradiction,
    Lengths,
    SimToPrev,
}

impl FeatureGroup {
    pub const ALL: [FeatureGroup; 12] = [
        FeatureGroup::Embeddings,
        FeatureGroup::Metadata,
        FeatureGroup::Sentiment,
        FeatureGroup::Topics,
        FeatureGroup::Discourse,
        FeatureGroup::Ner,
        FeatureGroup::SegmentSize,
        FeatureGroup::Position,
        FeatureGroup::Linguistic,
        FeatureGroup::Contradiction,
        FeatureGroup::Lengths,
        FeatureGroup::SimToPrev,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            FeatureGroup::Embeddings => "embeddings",
            FeatureGroup::Metadata => "metadata",
            FeatureGroup::Sentiment => "sentiment",
            FeatureGroup::Topics => "topics",
            FeatureGroup::Discourse => "discourse",
            FeatureGroup::Ner => "ner",
            FeatureGroup::SegmentSize => "segment_size",
            FeatureGroup::Position => "position",
            FeatureGroup::Linguistic => "linguistic",
            FeatureGroup::Contradiction => "contradiction",
            FeatureGroup::Lengths => "lengths",
            FeatureGroup::SimToPrev => "sim_to_prev",
        }
    }

    pub fn from_name(name: &str) -> Option<FeatureGroup> {
        fn norm(s: &str) -> impl Iterator<Item = char> + '_ {
            s.chars().filter(|c| c.is_alphanumeric()).map(|c| c.to_ascii_lowercase())
        }
        FeatureGroup::ALL.into_iter().find(|g| norm(g.name()).eq(norm(name)))
    }

    /// Whether the group reads from the sidecar annotation store.
    pub const fn needs_annotations(self) -> bool {
        matches!(
            self,
            FeatureGroup::Embeddings
                | FeatureGroup::Sentiment
                | FeatureGroup::Topics
                | FeatureGroup::Discourse
                | FeatureGroup::Ner
                | FeatureGroup::Linguistic
                | FeatureGroup::SimToPrev
        )
    }

    const fn bit(self) -> u16 {
        1 << self as u16
    }
}

impl fmt::Display for FeatureGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of feature groups; iteration follows canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct GroupSet(u16);

impl GroupSet {
    pub const fn empty() -> GroupSet {
        GroupSet(0)
    }

    pub const fn all() -> GroupSet {
        GroupSet((1 << 12) - 1)
    }

    pub fn contains(self, g: FeatureGroup) -> bool {
        self.0 & g.bit() != 0
    }

    pub fn with(self, g: FeatureGroup) -> GroupSet {
        GroupSet(self.0 | g.bit())
    }

    pub fn without(self, g: FeatureGroup) -> GroupSet {
        GroupSet(self.0 & !g.bit())
    }

    pub fn difference(self, other: GroupSet) -> GroupSet {
        GroupSet(self.0 & !other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = FeatureGroup> {
        FeatureGroup::ALL.into_iter().filter(move |g| self.contains(*g))
    }
}

impl FromIterator<FeatureGroup> for GroupSet {
    fn from_iter<I: IntoIterator<Item = FeatureGroup>>(iter: I) -> Self {
        iter.into_iter().fold(GroupSet::empty(), GroupSet::with)
    }
}
