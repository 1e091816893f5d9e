use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use super::{
    contradiction_features, lexicon_features, sim_to_checked, structural_features, tfidf_vector,
    AnnotationStore, DebateLayout, DiscourseRelation, FeatureGroup, GroupSet, Lexicon, SpeakerRole,
    SpeakerRoles, VocabConfig, Vocabulary, POS_TAGS,
};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::features::build_vocabulary;
use crate::math;
use crate::text::tokenize;

const STD_EPSILON: f64 = 1e-12;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FeatureConfig {
    pub vocab: VocabConfig,
    pub roles: SpeakerRoles,
}

/// Extractor state fitted on the training rows of one fold.
#[derive(Clone, Debug, PartialEq)]
pub struct FittedFeatures {
    train_rows: Vec<usize>,
    vocab: Vocabulary,
    /// Training rows selected by at least one source.
    positive_rows: Vec<usize>,
}

impl FittedFeatures {
    pub fn train_rows(&self) -> &[usize] {
        &self.train_rows
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn positive_rows(&self) -> &[usize] {
        &self.positive_rows
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ColumnScale {
    pub mean: f64,
    /// 1 for columns that are constant on the training rows.
    pub std: f64,
}

/// Dense row-major feature matrix with one row per corpus sentence.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
    group_spans: Vec<(FeatureGroup, Range<usize>)>,
    column_keys: Vec<u64>,
    scaling: Option<Vec<ColumnScale>>,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.n_cols..(r + 1) * self.n_cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.n_cols + c]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn group_spans(&self) -> &[(FeatureGroup, Range<usize>)] {
        &self.group_spans
    }

    pub fn span(&self, group: FeatureGroup) -> Option<Range<usize>> {
        self.group_spans.iter().find(|(g, _)| *g == group).map(|(_, r)| r.clone())
    }

    /// Stable identity of every column: `(group ordinal << 32) | offset in group`.
    /// Removing a group leaves the keys of all other columns unchanged.
    pub fn column_keys(&self) -> &[u64] {
        &self.column_keys
    }

    pub fn scaling(&self) -> Option<&[ColumnScale]> {
        self.scaling.as_deref()
    }

    /// Copy restricted to `groups`, keeping canonical order. Scaling is dropped,
    /// so call this on an unstandardized matrix and standardize afterwards.
    pub fn select_groups(&self, groups: GroupSet) -> FeatureMatrix {
        let mut cols = Vec::new();
        let mut group_spans = Vec::new();
        for (g, span) in &self.group_spans {
            if groups.contains(*g) {
                group_spans.push((*g, cols.len()..cols.len() + span.len()));
                cols.extend(span.clone());
            }
        }
        let n_cols = cols.len();
        let mut data = Vec::with_capacity(self.n_rows * n_cols);
        for r in 0..self.n_rows {
            let row = self.row(r);
            data.extend(cols.iter().map(|&c| row[c]));
        }
        FeatureMatrix {
            n_rows: self.n_rows,
            n_cols,
            data,
            group_spans,
            column_keys: cols.iter().map(|&c| self.column_keys[c]).collect(),
            scaling: None,
        }
    }

    /// Z-scores every column with moments taken over `train_rows` only.
    /// Columns constant on those rows are mean-centred and left unscaled.
    pub fn standardize(&mut self, train_rows: &[usize]) -> Result<()> {
        if train_rows.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        let n = train_rows.len() as f64;
        let mut mean = vec![0.0; self.n_cols];
        for &r in train_rows {
            for (m, x) in mean.iter_mut().zip(self.row(r)) {
                *m += x;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; self.n_cols];
        for &r in train_rows {
            for ((v, x), m) in var.iter_mut().zip(self.row(r)).zip(&mean) {
                *v += (x - m) * (x - m);
            }
        }
        let scaling: Vec<ColumnScale> = mean
            .iter()
            .zip(&var)
            .map(|(&mean, &v)| {
                let std = math::sqrt(v / n);
                ColumnScale { mean, std: if std > STD_EPSILON { std } else { 1.0 } }
            })
            .collect();
        for row in self.data.chunks_mut(self.n_cols.max(1)) {
            for (x, s) in row.iter_mut().zip(&scaling) {
                *x = (*x - s.mean) / s.std;
            }
        }
        self.scaling = Some(scaling);
        Ok(())
    }
}

/// Computes feature groups for the sentences of one corpus.
///
/// Holds the per-sentence token lists and per-debate intervention layouts so
/// repeated assembly across folds and ablations does not re-tokenize.
pub struct FeatureExtractor<'a> {
    corpus: &'a Corpus,
    annotations: Option<&'a AnnotationStore>,
    lexicons: &'a [Lexicon],
    config: &'a FeatureConfig,
    layouts: Vec<DebateLayout>,
    tokens: Vec<Vec<String>>,
}

impl<'a> FeatureExtractor<'a> {
    pub fn new(
        corpus: &'a Corpus,
        annotations: Option<&'a AnnotationStore>,
        lexicons: &'a [Lexicon],
        config: &'a FeatureConfig,
    ) -> FeatureExtractor<'a> {
        FeatureExtractor {
            corpus,
            annotations,
            lexicons,
            config,
            layouts: corpus.debates().iter().map(DebateLayout::new).collect(),
            tokens: corpus.sentences().map(|s| tokenize(&s.text)).collect(),
        }
    }

    pub fn corpus(&self) -> &Corpus {
        self.corpus
    }

    /// Fits the vocabulary and the checked-claim set on `train_rows`.
    pub fn fit(&self, train_rows: &[usize]) -> Result<FittedFeatures> {
        let mut rows = train_rows.to_vec();
        rows.sort_unstable();
        rows.dedup();
        let vocab = build_vocabulary(rows.iter().map(|&r| self.corpus.locate(r).1), self.config.vocab)?;
        let positive_rows = rows
            .iter()
            .copied()
            .filter(|&r| self.corpus.locate(r).1.labels.any())
            .collect();
        Ok(FittedFeatures { train_rows: rows, vocab, positive_rows })
    }

    fn lexicons_where(&self, sentiment: bool) -> Vec<&Lexicon> {
        self.lexicons.iter().filter(|l| l.kind.is_sentiment() == sentiment).collect()
    }

    fn annotations_for(&self, group: FeatureGroup) -> Result<&'a AnnotationStore> {
        self.annotations.ok_or(Error::MissingDependency {
            group,
            dependency: "a sidecar annotation store",
        })
    }

    pub fn check_groups(&self, groups: GroupSet) -> Result<()> {
        for g in groups.iter() {
            if g.needs_annotations() {
                self.annotations_for(g)?;
            }
        }
        Ok(())
    }

    pub fn group_width(&self, group: FeatureGroup, fitted: &FittedFeatures) -> Result<usize> {
        Ok(match group {
            FeatureGroup::Embeddings => self.annotations_for(group)?.embedding_dim(),
            FeatureGroup::Metadata => SpeakerRole::ALL.len() + 1,
            FeatureGroup::Sentiment => {
                self.annotations_for(group)?;
                1 + 2 * self.lexicons_where(true).len()
            }
            FeatureGroup::Topics => self.annotations_for(group)?.topic_dim(),
            FeatureGroup::Discourse => {
                self.annotations_for(group)?;
                2 * DiscourseRelation::ALL.len()
            }
            FeatureGroup::Ner => {
                self.annotations_for(group)?;
                5
            }
            FeatureGroup::SegmentSize => 2,
            FeatureGroup::Position => 2,
            FeatureGroup::Linguistic => {
                self.annotations_for(group)?;
                fitted.vocab.len() + POS_TAGS.len() + 2 * self.lexicons_where(false).len()
            }
            FeatureGroup::Contradiction => 3,
            FeatureGroup::Lengths => 2,
            FeatureGroup::SimToPrev => {
                self.annotations_for(group)?;
                1
            }
        })
    }

    fn fill_group(&self, group: FeatureGroup, row: usize, fitted: &FittedFeatures, out: &mut [f64]) {
        let (d, sentence) = self.corpus.locate(row);
        let tokens = &self.tokens[row];
        let ann = || self.annotations.expect("checked by group_width").get(row);
        match group {
            FeatureGroup::Embeddings => out.copy_from_slice(&ann().embedding),
            FeatureGroup::Metadata | FeatureGroup::SegmentSize | FeatureGroup::Position => {
                let debate = &self.corpus.debates()[d];
                let s = structural_features(debate, &self.layouts[d], sentence.index, &self.config.roles);
                match group {
                    FeatureGroup::Metadata => {
                        for (o, role) in out.iter_mut().zip(SpeakerRole::ALL) {
                            *o = f64::from(u8::from(s.role == role));
                        }
                        out[SpeakerRole::ALL.len()] = f64::from(u8::from(s.opponent_mentioned));
                    }
                    FeatureGroup::SegmentSize => {
                        out[0] = s.intervention_length as f64;
                        out[1] = math::ln(s.intervention_length as f64);
                    }
                    _ => {
                        out[0] = s.debate_position;
                        out[1] = s.intervention_position;
                    }
                }
            }
            FeatureGroup::Sentiment => {
                out[0] = ann().sentiment;
                out[1..].copy_from_slice(&lexicon_features(tokens, &self.lexicons_where(true)));
            }
            FeatureGroup::Topics => out.copy_from_slice(&ann().topics),
            FeatureGroup::Discourse => {
                let a = ann();
                out.fill(0.0);
                out[a.discourse_prev.ordinal()] = 1.0;
                out[DiscourseRelation::ALL.len() + a.discourse_next.ordinal()] = 1.0;
            }
            FeatureGroup::Ner => {
                let a = ann();
                for (o, f) in out.iter_mut().zip(a.ner_flags) {
                    *o = f64::from(u8::from(f));
                }
                out[4] = f64::from(a.ner_count);
            }
            FeatureGroup::Linguistic => {
                let v = fitted.vocab.len();
                out[..v].fill(0.0);
                for (c, x) in tfidf_vector(sentence, &fitted.vocab) {
                    out[c] = x;
                }
                for (o, c) in out[v..v + POS_TAGS.len()].iter_mut().zip(ann().pos_counts) {
                    *o = f64::from(c);
                }
                out[v + POS_TAGS.len()..]
                    .copy_from_slice(&lexicon_features(tokens, &self.lexicons_where(false)));
            }
            FeatureGroup::Contradiction => {
                out.copy_from_slice(&contradiction_features(&sentence.text).to_array())
            }
            FeatureGroup::Lengths => {
                out[0] = tokens.len() as f64;
                out[1] = sentence.text.chars().count() as f64;
            }
            FeatureGroup::SimToPrev => {
                let store = self.annotations.expect("checked by group_width");
                // A training positive is not compared with itself.
                let others = fitted
                    .positive_rows
                    .iter()
                    .filter(|&&p| p != row)
                    .map(|&p| store.get(p).embedding.as_slice());
                out[0] = sim_to_checked(&store.get(row).embedding, others);
            }
        }
    }

    /// Unstandardized matrix for `groups`, columns in canonical group order.
    pub fn assemble_raw(&self, groups: GroupSet, fitted: &FittedFeatures) -> Result<FeatureMatrix> {
        self.check_groups(groups)?;
        let mut group_spans = Vec::new();
        let mut column_keys = Vec::new();
        let mut n_cols = 0;
        for g in groups.iter() {
            let w = self.group_width(g, fitted)?;
            group_spans.push((g, n_cols..n_cols + w));
            column_keys.extend((0..w as u64).map(|o| ((g as u64) << 32) | o));
            n_cols += w;
        }
        let n_rows = self.corpus.len();
        let mut data = vec![0.0; n_rows * n_cols];
        for row in 0..n_rows {
            let out = &mut data[row * n_cols..(row + 1) * n_cols];
            for (g, span) in &group_spans {
                self.fill_group(*g, row, fitted, &mut out[span.clone()]);
            }
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { what: "feature matrix" });
        }
        Ok(FeatureMatrix { n_rows, n_cols, data, group_spans, column_keys, scaling: None })
    }
}

/// Builds the standardized network input for `groups`.
///
/// Extractors and standardization moments come from the training rows held in
/// `fitted`; test rows are transformed with those statistics.
pub fn assemble_matrix(
    extractor: &FeatureExtractor<'_>,
    groups: GroupSet,
    fitted: &FittedFeatures,
) -> Result<FeatureMatrix> {
    let mut m = extractor.assemble_raw(groups, fitted)?;
    m.standardize(&fitted.train_rows)?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Labels, Sentence};
    use crate::features::{Annotation, AnnotationRecord, LexiconKind};
    use alloc::format;

    const TEXTS: [&str; 6] = [
        "Donald thinks that climate change is a hoax.",
        "I did not.",
        "We will create 10 million new jobs in 2017.",
        "Thank you, Lester.",
        "Hillary has been fighting ISIS her entire adult life, not successfully.",
        "The tax plan would cost $5 trillion.",
    ];
    const SPEAKERS: [&str; 3] = ["Clinton", "Trump", "Holt"];

    fn fixture() -> (Corpus, AnnotationStore, Vec<Lexicon>) {
        let mut sentences = Vec::new();
        for d in 0..3 {
            for i in 0..8 {
                let flags = core::array::from_fn(|c| (d + i + c) % 5 == 0 && i % 2 == 0);
                sentences.push(Sentence {
                    debate_id: format!("deb{d}"),
                    index: i,
                    speaker: SPEAKERS[(i / 2 + d) % 3].into(),
                    text: TEXTS[(i * 7 + d) % TEXTS.len()].into(),
                    labels: Labels::from_flags(flags),
                });
            }
        }
        let corpus = Corpus::from_sentences(sentences).unwrap();
        let records = corpus.sentences().enumerate().map(|(row, s)| {
            let x = row as f64;
            AnnotationRecord {
                debate_id: s.debate_id.clone(),
                index: s.index,
                annotation: Annotation {
                    pos_counts: core::array::from_fn(|t| ((row + t) % 4) as u32),
                    ner_flags: [row % 2 == 0, row % 3 == 0, false, true],
                    ner_count: (row % 4) as u32,
                    sentiment: ((row % 5) as f64 - 2.0) / 2.0,
                    topics: vec![0.25, 0.25, 0.5 - (row % 3) as f64 * 0.1, (row % 3) as f64 * 0.1],
                    embedding: vec![libm::sin(x), libm::cos(x), 0.5 * libm::sin(2.0 * x)],
                    discourse_prev: DiscourseRelation::ALL[row % 4],
                    discourse_next: DiscourseRelation::ALL[(row + 1) % 6],
                },
            }
        });
        let store = AnnotationStore::build(&corpus, records.collect::<Vec<_>>()).unwrap();
        let lexicons = vec![
            Lexicon::new("bias", LexiconKind::Bias, ["hoax", "successfully"]).unwrap(),
            Lexicon::new("pos", LexiconKind::PositiveSentiment, ["thank", "new"]).unwrap(),
        ];
        (corpus, store, lexicons)
    }

    fn config() -> FeatureConfig {
        FeatureConfig { vocab: VocabConfig { lowercase: true, min_df: 2 }, ..Default::default() }
    }

    #[test]
    fn spans_cover_all_columns() {
        let (corpus, store, lex) = fixture();
        let cfg = config();
        let ex = FeatureExtractor::new(&corpus, Some(&store), &lex, &cfg);
        let fitted = ex.fit(&(0..16).collect::<Vec<_>>()).unwrap();
        let m = assemble_matrix(&ex, GroupSet::all(), &fitted).unwrap();
        assert_eq!(m.n_rows(), corpus.len());
        let mut next = 0;
        let mut total = 0;
        for (g, span) in m.group_spans() {
            assert_eq!(span.start, next);
            assert_eq!(span.len(), ex.group_width(*g, &fitted).unwrap());
            next = span.end;
            total += span.len();
        }
        assert_eq!(next, m.n_cols());
        assert_eq!(total, m.n_cols());
        assert_eq!(m.group_spans().len(), 12);
    }

    #[test]
    fn removing_embeddings_drops_embedding_dim() {
        let (corpus, store, lex) = fixture();
        let cfg = config();
        let ex = FeatureExtractor::new(&corpus, Some(&store), &lex, &cfg);
        let fitted = ex.fit(&(0..16).collect::<Vec<_>>()).unwrap();
        let all = ex.assemble_raw(GroupSet::all(), &fitted).unwrap();
        let less = ex.assemble_raw(GroupSet::all().without(FeatureGroup::Embeddings), &fitted).unwrap();
        assert_eq!(all.n_cols() - less.n_cols(), store.embedding_dim());
    }

    #[test]
    fn standardized_training_columns_have_unit_moments() {
        let (corpus, store, lex) = fixture();
        let cfg = config();
        let ex = FeatureExtractor::new(&corpus, Some(&store), &lex, &cfg);
        let train: Vec<usize> = (8..24).collect();
        let fitted = ex.fit(&train).unwrap();
        let raw = ex.assemble_raw(GroupSet::all(), &fitted).unwrap();
        let m = assemble_matrix(&ex, GroupSet::all(), &fitted).unwrap();
        let n = train.len() as f64;
        for c in 0..m.n_cols() {
            let mean = train.iter().map(|&r| m.get(r, c)).sum::<f64>() / n;
            let var = train.iter().map(|&r| (m.get(r, c) - mean).powi(2)).sum::<f64>() / n;
            let raw_constant = train.iter().all(|&r| raw.get(r, c) == raw.get(train[0], c));
            assert!(mean.abs() < 1e-9, "column {c} mean {mean}");
            if raw_constant {
                assert_eq!(m.scaling().unwrap()[c].std, 1.0);
            } else {
                assert!((libm::sqrt(var) - 1.0).abs() < 1e-6, "column {c}");
            }
        }
    }

    #[test]
    fn subsets_share_pre_standardization_values() {
        let (corpus, store, lex) = fixture();
        let cfg = config();
        let ex = FeatureExtractor::new(&corpus, Some(&store), &lex, &cfg);
        let fitted = ex.fit(&(0..16).collect::<Vec<_>>()).unwrap();
        let all = ex.assemble_raw(GroupSet::all(), &fitted).unwrap();
        let some: GroupSet = [FeatureGroup::Topics, FeatureGroup::Lengths, FeatureGroup::SimToPrev]
            .into_iter()
            .collect();
        let sub = ex.assemble_raw(some, &fitted).unwrap();
        for g in some.iter() {
            let (a, b) = (all.span(g).unwrap(), sub.span(g).unwrap());
            for r in 0..corpus.len() {
                assert_eq!(&all.row(r)[a.clone()], &sub.row(r)[b.clone()]);
            }
            let keys_a = &all.column_keys()[a];
            let keys_b = &sub.column_keys()[b];
            assert_eq!(keys_a, keys_b);
        }
    }

    #[test]
    fn selecting_groups_matches_direct_assembly() {
        let (corpus, store, lex) = fixture();
        let cfg = config();
        let ex = FeatureExtractor::new(&corpus, Some(&store), &lex, &cfg);
        let fitted = ex.fit(&(0..16).collect::<Vec<_>>()).unwrap();
        let all = ex.assemble_raw(GroupSet::all(), &fitted).unwrap();
        let groups = GroupSet::all().without(FeatureGroup::Linguistic).without(FeatureGroup::Metadata);
        assert_eq!(all.select_groups(groups), ex.assemble_raw(groups, &fitted).unwrap());
    }

    #[test]
    fn annotation_groups_need_a_store() {
        let (corpus, _, lex) = fixture();
        let cfg = config();
        let ex = FeatureExtractor::new(&corpus, None, &lex, &cfg);
        let fitted = ex.fit(&[0, 1, 2]).unwrap();
        let err = ex.assemble_raw(GroupSet::empty().with(FeatureGroup::Topics), &fitted).unwrap_err();
        assert!(matches!(err, Error::MissingDependency { group: FeatureGroup::Topics, .. }));
        let ok = ex
            .assemble_raw(GroupSet::empty().with(FeatureGroup::Lengths).with(FeatureGroup::Position), &fitted)
            .unwrap();
        assert_eq!(ok.n_cols(), 4);
    }

    #[test]
    fn length_feature_is_token_count() {
        let (corpus, store, lex) = fixture();
        let cfg = config();
        let ex = FeatureExtractor::new(&corpus, Some(&store), &lex, &cfg);
        let fitted = ex.fit(&[0, 1, 2]).unwrap();
        let m = ex.assemble_raw(GroupSet::empty().with(FeatureGroup::Lengths), &fitted).unwrap();
        for (r, s) in corpus.sentences().enumerate() {
            assert_eq!(m.get(r, 0), tokenize(&s.text).len() as f64);
        }
    }

    #[test]
    fn sim_to_prev_skips_the_row_itself() {
        let (corpus, store, lex) = fixture();
        let cfg = config();
        let ex = FeatureExtractor::new(&corpus, Some(&store), &lex, &cfg);
        let train: Vec<usize> = (0..16).collect();
        let fitted = ex.fit(&train).unwrap();
        let m = ex.assemble_raw(GroupSet::empty().with(FeatureGroup::SimToPrev), &fitted).unwrap();
        let p = fitted.positive_rows()[0];
        let expected = sim_to_checked(
            &store.get(p).embedding,
            fitted.positive_rows().iter().filter(|&&q| q != p).map(|&q| store.get(q).embedding.as_slice()),
        );
        assert_eq!(m.get(p, 0), expected);
    }
}
