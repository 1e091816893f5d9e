//! Debates, sentences and their nine-source label matrix.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::source::SourceId;

/// Binary selection decisions of the nine real sources for one sentence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Labels(u16);

impl Labels {
    pub const NONE: Labels = Labels(0);

    /// Builds labels from raw integers in [`SourceId::REAL`] order.
    /// Anything outside `{0, 1}` is rejected.
    pub fn try_from_values(values: &[i64]) -> core::result::Result<Labels, String> {
        if values.len() != SourceId::REAL.len() {
            return Err(format!("expected 9 labels, found {}", values.len()));
        }
        let mut bits = 0u16;
        for (i, &v) in values.iter().enumerate() {
            match v {
                0 => {}
                1 => bits |= 1 << i,
                other => {
                    return Err(format!(
                        "label {} = {other} is not 0 or 1",
                        SourceId::REAL[i]
                    ))
                }
            }
        }
        Ok(Labels(bits))
    }

    pub fn from_flags(flags: [bool; 9]) -> Labels {
        let mut bits = 0u16;
        for (i, f) in flags.iter().enumerate() {
            if *f {
                bits |= 1 << i;
            }
        }
        Labels(bits)
    }

    /// Label for `source`; for [`SourceId::Any`] this is the OR of all nine.
    pub fn get(self, source: SourceId) -> bool {
        match source.column() {
            Some(c) => self.0 & (1 << c) != 0,
            None => self.any(),
        }
    }

    pub fn set(&mut self, source: SourceId, value: bool) {
        if let Some(c) = source.column() {
            if value {
                self.0 |= 1 << c;
            } else {
                self.0 &= !(1 << c);
            }
        }
    }

    pub fn any(self) -> bool {
        self.0 != 0
    }

    /// Number of sources that selected the sentence.
    pub fn count(self) -> usize {
        self.0.count_ones() as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sentence {
    pub debate_id: String,
    /// 0-based position within the debate.
    pub index: usize,
    pub speaker: String,
    pub text: String,
    pub labels: Labels,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Debate {
    pub id: String,
    pub sentences: Vec<Sentence>,
}

impl Debate {
    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

/// Validated, immutable collection of debates in transcript order.
///
/// Rows are numbered globally in corpus order; many downstream structures
/// (annotation stores, feature matrices) are indexed by that row number.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Corpus {
    debates: Vec<Debate>,
    offsets: Vec<usize>,
}

impl Corpus {
    /// Groups `sentences` (in input order) into debates and validates them.
    ///
    /// Records of one debate must be contiguous, with indices `0, 1, 2, ...`;
    /// texts must be non-empty after trimming.
    pub fn from_sentences<I>(sentences: I) -> Result<Corpus>
    where
        I: IntoIterator<Item = Sentence>,
    {
        let mut debates: Vec<Debate> = Vec::new();
        let mut seen: BTreeMap<String, ()> = BTreeMap::new();
        for (record, s) in sentences.into_iter().enumerate() {
            if s.text.trim().is_empty() {
                return Err(Error::InvalidRecord {
                    record,
                    reason: format!("({}, {}): empty text", s.debate_id, s.index),
                });
            }
            if s.debate_id.is_empty() {
                return Err(Error::InvalidRecord { record, reason: "empty debate_id".into() });
            }
            let continues = debates.last().is_some_and(|d| d.id == s.debate_id);
            if !continues {
                if seen.contains_key(&s.debate_id) {
                    if s.index < debates.iter().find(|d| d.id == s.debate_id).map_or(0, Debate::len)
                    {
                        return Err(Error::DuplicateSentence {
                            debate_id: s.debate_id,
                            index: s.index,
                        });
                    }
                    return Err(Error::InvalidRecord {
                        record,
                        reason: format!("records of debate {} are not contiguous", s.debate_id),
                    });
                }
                seen.insert(s.debate_id.clone(), ());
                debates.push(Debate { id: s.debate_id.clone(), sentences: Vec::new() });
            }
            let debate = debates.last_mut().expect("pushed above");
            let expected = debate.sentences.len();
            if s.index < expected {
                return Err(Error::DuplicateSentence { debate_id: s.debate_id, index: s.index });
            }
            if s.index != expected {
                return Err(Error::InvalidRecord {
                    record,
                    reason: format!(
                        "debate {}: expected index {expected}, found {}",
                        s.debate_id, s.index
                    ),
                });
            }
            debate.sentences.push(s);
        }
        Ok(Corpus::from_debates_unchecked(debates))
    }

    fn from_debates_unchecked(debates: Vec<Debate>) -> Corpus {
        let mut offsets = Vec::with_capacity(debates.len() + 1);
        let mut acc = 0;
        for d in &debates {
            offsets.push(acc);
            acc += d.len();
        }
        offsets.push(acc);
        Corpus { debates, offsets }
    }

    pub fn debates(&self) -> &[Debate] {
        &self.debates
    }

    pub fn len(&self) -> usize {
        self.offsets.last().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> + '_ {
        self.debates.iter().flat_map(|d| d.sentences.iter())
    }

    pub fn debate_position(&self, debate_id: &str) -> Option<usize> {
        self.debates.iter().position(|d| d.id == debate_id)
    }

    /// Global row range of the `i`-th debate.
    pub fn debate_rows(&self, debate: usize) -> core::ops::Range<usize> {
        self.offsets[debate]..self.offsets[debate + 1]
    }

    /// Global row of `(debate_id, index)`.
    pub fn row_of(&self, debate_id: &str, index: usize) -> Option<usize> {
        let d = self.debate_position(debate_id)?;
        (index < self.debates[d].len()).then(|| self.offsets[d] + index)
    }

    /// `(debate position, sentence)` for a global row.
    pub fn locate(&self, row: usize) -> (usize, &Sentence) {
        let d = match self.offsets.binary_search(&row) {
            Ok(mut i) => {
                // skip over empty debates sharing this offset
                while self.offsets[i + 1] == row {
                    i += 1;
                }
                i
            }
            Err(i) => i - 1,
        };
        (d, &self.debates[d].sentences[row - self.offsets[d]])
    }

    /// Returns a copy keeping only the debates listed, in corpus order.
    pub fn subset(&self, debate_ids: &[&str]) -> Corpus {
        let debates = self
            .debates
            .iter()
            .filter(|d| debate_ids.contains(&d.id.as_str()))
            .cloned()
            .collect();
        Corpus::from_debates_unchecked(debates)
    }

    /// Returns a copy whose labels are rewritten by `f`.
    pub fn map_labels(&self, mut f: impl FnMut(&Sentence) -> Labels) -> Corpus {
        let debates = self
            .debates
            .iter()
            .map(|d| Debate {
                id: d.id.clone(),
                sentences: d
                    .sentences
                    .iter()
                    .map(|s| Sentence { labels: f(s), ..s.clone() })
                    .collect(),
            })
            .collect();
        Corpus::from_debates_unchecked(debates)
    }
}

/// ANY label per sentence, in corpus row order.
pub fn derive_any_labels(corpus: &Corpus) -> Vec<bool> {
    corpus.sentences().map(|s| s.labels.any()).collect()
}

/// How many sentences were selected by exactly / at least `n` sources.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AgreementTable {
    exact: [usize; 10],
}

impl AgreementTable {
    /// Sentences selected by exactly `n` sources, `n` in `1..=9`.
    pub fn exact(&self, n: usize) -> usize {
        if (1..=9).contains(&n) {
            self.exact[n]
        } else {
            0
        }
    }

    /// Sentences selected by `n` or more sources.
    pub fn cumulative(&self, n: usize) -> usize {
        if !(1..=9).contains(&n) {
            return 0;
        }
        self.exact[n..].iter().sum()
    }

    /// Rows `(n, exact, cumulative)` from 9 down to 1.
    pub fn rows(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (1..=9).rev().map(move |n| (n, self.exact(n), self.cumulative(n)))
    }
}

pub fn agreement_table(corpus: &Corpus) -> AgreementTable {
    let mut exact = [0usize; 10];
    for s in corpus.sentences() {
        exact[s.labels.count()] += 1;
    }
    exact[0] = 0;
    AgreementTable { exact }
}

/// One leave-one-debate-out split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fold {
    /// Position of the test debate in the corpus.
    pub position: usize,
    pub test_debate_id: String,
    pub train_debate_ids: Vec<String>,
}

pub fn make_folds(corpus: &Corpus) -> Result<Vec<Fold>> {
    let ids: Vec<&str> = corpus.debates().iter().map(|d| d.id.as_str()).collect();
    if ids.len() < 2 {
        return Err(Error::TooFewDebates { found: ids.len() });
    }
    Ok(ids
        .iter()
        .enumerate()
        .map(|(position, test)| Fold {
            position,
            test_debate_id: String::from(*test),
            train_debate_ids: ids
                .iter()
                .filter(|d| *d != test)
                .map(|d| String::from(*d))
                .collect(),
        })
        .collect())
}
