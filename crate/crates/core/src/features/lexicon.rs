use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::text::tokenize;

/// What a lexicon measures; decides which feature group its counts land in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LexiconKind {
    Bias,
    Assertive,
    Subjective,
    PositiveSentiment,
    NegativeSentiment,
}

impl LexiconKind {
    pub const ALL: [LexiconKind; 5] = [
        LexiconKind::Bias,
        LexiconKind::Assertive,
        LexiconKind::Subjective,
        LexiconKind::PositiveSentiment,
        LexiconKind::NegativeSentiment,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            LexiconKind::Bias => "bias",
            LexiconKind::Assertive => "assertive",
            LexiconKind::Subjective => "subjective",
            LexiconKind::PositiveSentiment => "positive",
            LexiconKind::NegativeSentiment => "negative",
        }
    }

    pub fn from_name(name: &str) -> Option<LexiconKind> {
        LexiconKind::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(name))
    }

    pub const fn is_sentiment(self) -> bool {
        matches!(self, LexiconKind::PositiveSentiment | LexiconKind::NegativeSentiment)
    }
}

/// A set of words or multi-word phrases, stored in tokenized form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lexicon {
    pub name: String,
    pub kind: LexiconKind,
    entries: BTreeSet<String>,
    longest: usize,
}

impl Lexicon {
    pub fn new<I, S>(name: impl Into<String>, kind: LexiconKind, entries: I) -> Result<Lexicon>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let name = name.into();
        let mut set = BTreeSet::new();
        let mut longest = 0;
        for e in entries {
            let tokens = tokenize(e.as_ref());
            if tokens.is_empty() {
                continue;
            }
            longest = longest.max(tokens.len());
            set.insert(tokens.join(" "));
        }
        if set.is_empty() {
            return Err(Error::InvalidConfig(alloc::format!("lexicon {name} has no entries")));
        }
        Ok(Lexicon { name, kind, entries: set, longest })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of (possibly overlapping) entry occurrences in `tokens`.
    pub fn count_matches(&self, tokens: &[String]) -> usize {
        let mut count = 0;
        let mut buf = String::new();
        for start in 0..tokens.len() {
            buf.clear();
            for (k, tok) in tokens[start..].iter().take(self.longest).enumerate() {
                if k > 0 {
                    buf.push(' ');
                }
                buf.push_str(tok);
                if self.entries.contains(&buf) {
                    count += 1;
                }
            }
        }
        count
    }
}

/// Per lexicon: `(raw count, count / token count)`, flattened.
pub fn lexicon_features(tokens: &[String], lexicons: &[&Lexicon]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * lexicons.len());
    for lex in lexicons {
        let c = lex.count_matches(tokens) as f64;
        out.push(c);
        out.push(if tokens.is_empty() { 0.0 } else { c / tokens.len() as f64 });
    }
    out
}
