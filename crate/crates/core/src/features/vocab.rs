use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::Sentence;
use crate::error::{Error, Result};
use crate::math;
use crate::text::tokenize_with;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VocabConfig {
    pub lowercase: bool,
    /// Minimum number of training sentences a term must occur in.
    pub min_df: usize,
}

impl Default for VocabConfig {
    fn default() -> Self {
        VocabConfig { lowercase: true, min_df: 3 }
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Term {
    column: usize,
    df: usize,
}

/// Bag-of-words vocabulary fitted on training sentences.
///
/// Columns are assigned in lexicographic term order, so the vocabulary does
/// not depend on the order in which training sentences are presented.
#[derive(Clone, Debug, PartialEq)]
pub struct Vocabulary {
    terms: BTreeMap<String, Term>,
    idf: Vec<f64>,
    document_count: usize,
    config: VocabConfig,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.idf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idf.is_empty()
    }

    pub fn document_count(&self) -> usize {
        self.document_count
    }

    pub fn config(&self) -> VocabConfig {
        self.config
    }

    pub fn column(&self, term: &str) -> Option<usize> {
        self.terms.get(term).map(|t| t.column)
    }

    pub fn document_frequency(&self, term: &str) -> Option<usize> {
        self.terms.get(term).map(|t| t.df)
    }

    /// `ln(N / (1 + df)) + 1`.
    pub fn idf(&self, term: &str) -> Option<f64> {
        self.column(term).map(|c| self.idf[c])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.terms.iter().map(|(t, e)| (t.as_str(), e.column))
    }
}

pub fn build_vocabulary<'a, I>(train: I, config: VocabConfig) -> Result<Vocabulary>
where
    I: IntoIterator<Item = &'a Sentence>,
{
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    let mut n = 0usize;
    for s in train {
        n += 1;
        let distinct: BTreeSet<String> = tokenize_with(&s.text, config.lowercase).into_iter().collect();
        for t in distinct {
            *df.entry(t).or_insert(0) += 1;
        }
    }
    if n == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    let mut terms = BTreeMap::new();
    let mut idf = Vec::new();
    for (term, count) in df {
        if count >= config.min_df {
            let column = idf.len();
            idf.push(math::ln(n as f64 / (1.0 + count as f64)) + 1.0);
            terms.insert(term, Term { column, df: count });
        }
    }
    Ok(Vocabulary { terms, idf, document_count: n, config })
}

/// Sparse TF.IDF vector `(column, tf * idf)` sorted by column. Unknown terms are dropped.
pub fn tfidf_vector(sentence: &Sentence, vocab: &Vocabulary) -> Vec<(usize, f64)> {
    let mut tf: BTreeMap<usize, usize> = BTreeMap::new();
    for t in tokenize_with(&sentence.text, vocab.config.lowercase) {
        if let Some(c) = vocab.column(&t) {
            *tf.entry(c).or_insert(0) += 1;
        }
    }
    tf.into_iter().map(|(c, n)| (c, n as f64 * vocab.idf[c])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tests::sentence;
    use alloc::vec;
    use alloc::vec::Vec;

    fn docs(texts: &[&str]) -> Vec<Sentence> {
        texts.iter().enumerate().map(|(i, t)| sentence("d", i, "S", t, [0; 9])).collect()
    }

    #[test]
    fn min_df_threshold() {
        let d = docs(&["alpha beta", "beta gamma", "beta delta"]);
        let v = build_vocabulary(&d, VocabConfig { lowercase: true, min_df: 2 }).unwrap();
        assert_eq!(v.column("alpha"), None);
        assert_eq!(v.document_frequency("beta"), Some(3));
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn idf_of_term_in_two_of_four_documents() {
        let d = docs(&["tax cut", "tax plan", "jobs", "growth"]);
        let v = build_vocabulary(&d, VocabConfig { lowercase: true, min_df: 1 }).unwrap();
        // ln(4 / 3) + 1
        let expected = 0.287_682_072_451_780_9 + 1.0;
        assert!((v.idf("tax").unwrap() - expected).abs() < 1e-12);
        assert!((v.idf("tax").unwrap() - 1.2877).abs() < 5e-5);

        let s = sentence("q", 0, "S", "Tax, tax!", [0; 9]);
        let vec = tfidf_vector(&s, &v);
        assert_eq!(vec.len(), 1);
        assert!((vec[0].1 - 2.0 * expected).abs() < 1e-12);
        assert!((vec[0].1 - 2.5754).abs() < 1e-4);
    }

    #[test]
    fn empty_training_set_is_an_error() {
        let none: Vec<Sentence> = Vec::new();
        assert_eq!(build_vocabulary(&none, VocabConfig::default()), Err(Error::EmptyTrainingSet));
    }

    #[test]
    fn out_of_vocabulary_sentence_is_zero() {
        let d = docs(&["a b", "a b", "a b"]);
        let v = build_vocabulary(&d, VocabConfig::default()).unwrap();
        assert!(tfidf_vector(&sentence("q", 0, "S", "zzz yyy", [0; 9]), &v).is_empty());
    }

    #[test]
    fn duplicating_tokens_doubles_entries() {
        let d = docs(&["tax jobs", "tax growth", "jobs growth", "tax"]);
        let v = build_vocabulary(&d, VocabConfig { lowercase: true, min_df: 1 }).unwrap();
        let once = tfidf_vector(&sentence("q", 0, "S", "tax jobs growth", [0; 9]), &v);
        let twice = tfidf_vector(&sentence("q", 0, "S", "tax jobs growth tax jobs growth", [0; 9]), &v);
        for ((c1, a), (c2, b)) in once.iter().zip(&twice) {
            assert_eq!(c1, c2);
            assert!((2.0 * a - b).abs() < 1e-12);
        }
        assert!(once.iter().all(|(_, x)| *x >= 0.0));
    }

    #[test]
    fn vocabulary_ignores_training_order() {
        let mut d = docs(&["b a c", "c a", "a", "b c", "c"]);
        let v1 = build_vocabulary(&d, VocabConfig { lowercase: true, min_df: 2 }).unwrap();
        d.reverse();
        let v2 = build_vocabulary(&d, VocabConfig { lowercase: true, min_df: 2 }).unwrap();
        assert_eq!(v1, v2);
        assert_eq!(v1.terms().map(|(t, _)| t).collect::<Vec<_>>(), vec!["a", "b", "c"]);
    }
}
